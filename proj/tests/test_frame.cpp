#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nbc/corpus.hpp"
#include "nbc/curve.hpp"
#include "nbc/frame.hpp"
#include "nbc/util.hpp"

using namespace nbc;

namespace {

CurvePtr example(double a, double b) {
  return make_expr_curve(example_curve(ExampleParams{a, b}));
}

double frame_distance(const CartanFrame& x, const CartanFrame& y) {
  double d = (x.L - y.L).max_abs();
  d = std::max(d, (x.N - y.N).max_abs());
  d = std::max(d, (x.W1 - y.W1).max_abs());
  d = std::max(d, (x.W2 - y.W2).max_abs());
  return d;
}

ErrorCode code_of(const std::function<void()>& thunk) {
  try {
    thunk();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("frame at the origin of the (1,2) example") {
  CartanFrame f = frame_at(*example(1, 2), 0.0);
  double r5 = std::sqrt(5.0);

  CHECK(f.k1 == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(f.k2 == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(f.k1_prime == doctest::Approx(0.0));

  CHECK(f.L[0] == doctest::Approx(1.0 / r5).epsilon(1e-12));
  CHECK(f.L[1] == doctest::Approx(0.0));
  CHECK(f.L[2] == doctest::Approx(1.0 / r5).epsilon(1e-12));
  CHECK(f.L[3] == doctest::Approx(0.0));

  CHECK(f.W1[0] == doctest::Approx(0.0));
  CHECK(f.W1[1] == doctest::Approx(1.0 / r5).epsilon(1e-12));
  CHECK(f.W1[2] == doctest::Approx(0.0));
  CHECK(f.W1[3] == doctest::Approx(-2.0 / r5).epsilon(1e-12));

  CHECK(f.N[0] == doctest::Approx(-r5 / 2.0).epsilon(1e-12));
  CHECK(f.N[1] == doctest::Approx(0.0));
  CHECK(f.N[2] == doctest::Approx(r5 / 2.0).epsilon(1e-12));
  CHECK(f.N[3] == doctest::Approx(0.0));

  CHECK(f.W2[0] == doctest::Approx(0.0));
  CHECK(f.W2[1] == doctest::Approx(2.0 / r5).epsilon(1e-12));
  CHECK(f.W2[2] == doctest::Approx(0.0));
  CHECK(f.W2[3] == doctest::Approx(1.0 / r5).epsilon(1e-12));

  CHECK(f.orientation_det == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(f.gram_residual < 1e-10);
  CHECK(f.frenet_residual < 1e-10);
}

TEST_CASE("constant curvatures across the whole family") {
  struct Params {
    double a, b, k1, k2;
  };
  for (const Params& p : {Params{1, 2, 1.5, -2}, Params{1, 3, 4, -3},
                          Params{2, 5, 10.5, -10}}) {
    CurvePtr curve = example(p.a, p.b);
    for (double s : linspace(-2.0, 2.0, 50)) {
      CartanFrame f = frame_at(*curve, s);
      CHECK(std::abs(f.k1 - p.k1) < 1e-8);
      CHECK(std::abs(f.k2 - p.k2) < 1e-8);
    }
  }
}

TEST_CASE("frames match the closed forms everywhere") {
  for (const ExampleParams& p : default_corpus()) {
    CurvePtr curve = make_expr_curve(example_curve(p));
    for (double s : linspace(-2.0, 2.0, 100)) {
      CartanFrame measured = frame_at(*curve, s);
      CartanFrame exact = closed_form_frame(p, s);
      CHECK(frame_distance(measured, exact) < 1e-9);
      CHECK(measured.gram_residual < 1e-8);
      CHECK(measured.frenet_residual < 1e-8);
    }
  }
}

TEST_CASE("frames match the closed forms for randomized parameters") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> mag(0.4, 2.2);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> where(-1.4, 1.4);
  int done = 0;
  while (done < 50) {
    double a = mag(rng) * (coin(rng) ? 1 : -1);
    double b = mag(rng) * (coin(rng) ? 1 : -1);
    if (std::abs(std::abs(a) - std::abs(b)) < 0.2) continue;
    ExampleParams p{a, b};
    CurvePtr curve = make_expr_curve(example_curve(p));
    double s = where(rng);
    CartanFrame measured = frame_at(*curve, s);
    CartanFrame exact = closed_form_frame(p, s);
    CAPTURE(a);
    CAPTURE(b);
    CAPTURE(s);
    CHECK(frame_distance(measured, exact) < 1e-9);
    ++done;
  }
}

TEST_CASE("parametrization gate") {
  // A null geodesic has c'' = 0: it fails the unit-acceleration condition.
  const char* geodesic_text = R"({
    "name": "geodesic", "constants": {},
    "components": ["s", "s", "0", "0"],
    "parametrization": "pseudo_arc", "domain": [-2.0, 2.0]
  })";
  CurvePtr geodesic = make_expr_curve(parse_curve_spec(geodesic_text));
  CHECK(code_of([&] { frame_at(*geodesic, 0.0); }) == ErrorCode::pseudo_arc);

  // A speed-doubled example is null but not unit-acceleration.
  CurvePtr scaled =
      make_expr_curve(scaled_example(ExampleParams{1.0, 2.0}, 2.0));
  CHECK(code_of([&] { frame_at(*scaled, 0.0); }) == ErrorCode::pseudo_arc);
}

TEST_CASE("residual quantifier bypasses the gate and flags perturbations") {
  // Perturbing one component breaks the frame equations measurably.
  const char* perturbed_text = R"json({
    "name": "perturbed",
    "constants": {"a": 1.0, "b": 2.0},
    "components": [
      "(1/sqrt(a^2+b^2))*(1/a)*sinh(a*s) + 0.001*s^3",
      "(1/sqrt(a^2+b^2))*(1/a)*cosh(a*s)",
      "(1/sqrt(a^2+b^2))*(1/b)*sin(b*s)",
      "(1/sqrt(a^2+b^2))*(1/b)*cos(b*s)"
    ],
    "parametrization": "pseudo_arc",
    "domain": [-2.0, 2.0]
  })json";
  CurvePtr perturbed = make_expr_curve(parse_curve_spec(perturbed_text));

  double worst = 0.0;
  for (double s : linspace(-2.0, 2.0, 21))
    worst = std::max(worst, frenet_residual(*perturbed, s));
  CHECK(worst > 1e-4);

  // On the clean curve the same quantity is at roundoff.
  CurvePtr clean = example(1, 2);
  CHECK(frenet_residual(*clean, 0.7) < 1e-10);
}

TEST_CASE("curvature tables") {
  CurvePtr curve = example(1, 2);
  std::vector<double> grid = linspace(-2.0, 2.0, 5);
  auto rows = curvature_table(*curve, grid);
  REQUIRE(rows.size() == 5);
  for (const CurvatureRow& row : rows) {
    REQUIRE(row.frame.has_value());
    CHECK(row.error.empty());
    CHECK(std::abs(row.frame->k1 - 1.5) < 1e-9);
  }

  // Empty grid, empty table.
  CHECK(curvature_table(*curve, std::span<const double>{}).empty());

  // An out-of-domain point is marked without spoiling its neighbors.
  std::vector<double> mixed = {0.0, 7.0, 1.0};
  rows = curvature_table(*curve, mixed);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].frame.has_value());
  CHECK_FALSE(rows[1].frame.has_value());
  CHECK(rows[1].error == "out-of-domain");
  CHECK(rows[2].frame.has_value());
}

TEST_CASE("internal consistency of the curvature extraction") {
  CurvePtr curve = example(1, 2);
  for (double s : linspace(-1.8, 1.8, 13)) {
    CurveJet cj = curve->jets(s, 10);
    CartanFrame f = frame_at(*curve, s);

    // k1 can be recomputed from the frame: <c''', N> = -k1.
    Vec4 c3 = cj.derivative(3);
    CHECK(std::abs(f.k1 + mink_dot(c3, f.N)) < 1e-10);

    // |k2| equals the ratio of derivative and frame determinants.
    Vec4 c1 = cj.derivative(1), c2 = cj.derivative(2), c4 = cj.derivative(4);
    double det_derivs = det4(c1, c2, c3, c4);
    double det_frame = det4(f.L, f.N, f.W1, f.W2);
    CHECK(std::abs(std::abs(f.k2) - std::abs(det_derivs / det_frame)) < 1e-8);
  }
}

TEST_CASE("frame extraction needs enough expansion orders") {
  CurvePtr curve = example(1, 2);
  CurveJet cj = curve->jets(0.0, 3);
  CHECK(code_of([&] { cartan_frame_jets(cj, 1e-10); }) ==
        ErrorCode::invalid_argument);
}
