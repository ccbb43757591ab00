#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nbc/bertrand.hpp"
#include "nbc/corpus.hpp"
#include "nbc/curve.hpp"
#include "nbc/frame.hpp"
#include "nbc/util.hpp"

using namespace nbc;

namespace {

CurvePtr example(double a, double b) {
  return make_expr_curve(example_curve(ExampleParams{a, b}));
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

// Null curve with genuinely varying curvatures (a polynomial, so no constant
// pair (alpha, beta) can satisfy alpha*k1 + beta*k2 = 1).  Not unit-speed in
// the pseudo-arc sense, hence declared general and reparametrized on use.
CurvePtr wavering_curve() {
  const char* text = R"({
    "name": "wavering",
    "constants": {},
    "components": [
      "(s^3/3 + s^5/5 + s)/2",
      "s^2/2",
      "s^3/3",
      "(s^3/3 + s^5/5 - s)/2"
    ],
    "parametrization": "general",
    "domain": [0.5, 1.5]
  })";
  return make_expr_curve(parse_curve_spec(text));
}

}  // namespace

TEST_CASE("case names") {
  CHECK(std::string(bertrand_case_name(BertrandCase::none)) == "none");
  CHECK(std::string(bertrand_case_name(BertrandCase::case_one)) == "I");
  CHECK(std::string(bertrand_case_name(BertrandCase::case_two)) == "II");
}

TEST_CASE("offset-constant classification") {
  CurvePtr curve = example(1, 2);  // k1 = 1.5, k2 = -2
  std::vector<double> grid = linspace(-1.5, 1.5, 20);

  SUBCASE("alpha = 0 with admissible beta is case I") {
    BertrandCondition cond = check_condition(*curve, 0.0, 0.5, grid);
    CHECK(cond.which == BertrandCase::case_one);
    CHECK(cond.condition_residual == 0.0);
    CHECK(cond.case1_margin == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(cond.ell0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(cond.ell0_residual < 1e-10);
    CHECK(cond.cartan_mate_feasible);
  }

  SUBCASE("constants on the line alpha*k1 + beta*k2 = 1 are case II") {
    BertrandCondition cond = check_condition(*curve, 1.0 / 3.0, -0.25, grid);
    CHECK(cond.which == BertrandCase::case_two);
    CHECK(cond.condition_residual < 1e-12);
    CHECK(cond.ell0 * cond.ell0 == doctest::Approx(5.0 / 6.0).epsilon(1e-10));
    CHECK(cond.cartan_mate_feasible);
  }

  SUBCASE("the zero offset is not a mate") {
    BertrandCondition cond = check_condition(*curve, 0.0, 0.0, grid);
    CHECK(cond.which == BertrandCase::none);
  }

  SUBCASE("case I requires 1 - beta*k2 > 0") {
    // beta*k2 = 1 exactly: the margin collapses to zero.
    BertrandCondition cond = check_condition(*curve, 0.0, -0.5, grid);
    CHECK(cond.which == BertrandCase::none);
    CHECK(cond.case1_margin == doctest::Approx(0.0));
  }

  SUBCASE("generic constants satisfy neither case") {
    // alpha*k1 + beta*k2 - 1 = 0.5*1.5 + 0.5*(-2) - 1 = -1.25.
    BertrandCondition cond = check_condition(*curve, 0.5, 0.5, grid);
    CHECK(cond.which == BertrandCase::none);
    CHECK(cond.condition_residual == doctest::Approx(1.25).epsilon(1e-12));
  }
}

TEST_CASE("constant fitting on a constant-curvature curve") {
  CurvePtr curve = example(1, 2);
  std::vector<double> grid = linspace(-1.5, 1.5, 20);
  FitResult fit = fit_constants(*curve, grid);

  // (k1, k2) = (1.5, -2) everywhere: the normal system is rank-1 and the
  // minimum-norm point of the solution line is (k1, k2)/(k1^2 + k2^2).
  CHECK(fit.underdetermined);
  CHECK(fit.alpha == doctest::Approx(0.24).epsilon(1e-10));
  CHECK(fit.beta == doctest::Approx(-0.32).epsilon(1e-10));
  CHECK(fit.residual < 1e-10);
  CHECK(fit.n == 20);
  CHECK(fit.dir_alpha == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(fit.dir_beta == doctest::Approx(0.6).epsilon(1e-10));
  // The direction really is the null direction of the fit.
  CHECK(std::abs(fit.dir_alpha * 1.5 + fit.dir_beta * (-2.0)) < 1e-10);
}

TEST_CASE("constant fitting fails cleanly") {
  CurvePtr curve = example(1, 2);

  SUBCASE("fewer than two samples") {
    std::vector<double> one = {0.0};
    CHECK(code_of([&] { fit_constants(*curve, one); }) ==
          ErrorCode::invalid_argument);
  }

  SUBCASE("varying curvatures admit no constants at all") {
    CurvePtr reparam =
        std::make_shared<PseudoArcReparamCurve>(wavering_curve());
    Interval dom = reparam->domain();
    std::vector<double> grid =
        linspace(dom.lo + 0.05, dom.hi - 0.05, 12);
    CHECK(code_of([&] { fit_constants(*reparam, grid); }) ==
          ErrorCode::no_solution);
  }
}

TEST_CASE("classical mates are obstructed on the whole example family") {
  struct Expect {
    double a, b, alpha_forced, obstruction;
  };
  const Expect table[] = {
      {1, 2, 2.0 / 3.0, 4.0 / 3.0},
      {1, 3, 0.25, 0.75},
      {2, 5, 1.0 / 10.5, 10.0 / 10.5},
  };
  for (const Expect& e : table) {
    CurvePtr curve = example(e.a, e.b);
    std::vector<double> grid = linspace(-1.5, 1.5, 20);
    Obstruction obs = classical_bertrand_obstruction(*curve, grid);
    CHECK(obs.alpha_forced == doctest::Approx(e.alpha_forced).epsilon(1e-9));
    CHECK(obs.obstruction == doctest::Approx(e.obstruction).epsilon(1e-9));
    CHECK(obs.obstruction > 0.5);
    CHECK(obs.k1_constant);
    CHECK(obs.k1_variation < 1e-8);
  }
}

TEST_CASE("case-I mate construction") {
  ExampleParams p{1, 2};
  CurvePtr base = make_expr_curve(example_curve(p));
  std::vector<double> grid = linspace(-1.4, 1.4, 15);

  // beta = 1/|ab| doubles the curve; the correspondence slope is sqrt(2).
  MateResult result = construct_mate(base, 0.0, 0.5, grid);
  const MateReport& rep = result.report;

  CHECK(rep.which == BertrandCase::case_one);
  CHECK(rep.ell0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
  CHECK(rep.ell0_constancy_residual < 1e-10);
  CHECK(rep.predicted_k1_bar == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(rep.predicted_abs_k2_bar == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.max_k1_error < 1e-6);
  CHECK(rep.max_abs_k2_error < 1e-6);
  CHECK(rep.measured_k1_bar == doctest::Approx(0.75).epsilon(1e-6));
  CHECK(std::abs(rep.measured_k2_bar) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.L_relation_residual < 1e-6);
  CHECK(rep.N_relation_residual < 1e-6);
  CHECK(rep.plane_coincidence_residual < 1e-6);
  // W1_bar = W1: no rotation within the spacelike plane.
  CHECK(std::abs(rep.rotation_angle) < 1e-6);
  REQUIRE(rep.rows.size() == grid.size());
  for (const MateVerificationRow& row : rep.rows)
    CHECK(row.s_bar == doctest::Approx(std::sqrt(2.0) * row.s).epsilon(1e-12));

  // The constructed mate coincides with the doubled curve, pseudo-arc
  // parametrized with slope sqrt(2).
  ExpectedMate em = expected_mate(p, BertrandCase::case_one);
  CHECK(em.alpha == 0.0);
  CHECK(em.beta == doctest::Approx(0.5));
  CHECK(em.slope == doctest::Approx(std::sqrt(2.0)));
  CurvePtr closed = make_expr_curve(em.spec);
  for (double sb : linspace(-1.4 * std::sqrt(2.0), 1.4 * std::sqrt(2.0), 9)) {
    Vec4 got = result.mate->jets(sb, 0).position();
    Vec4 want = closed->jets(sb, 0).position();
    CHECK((got - want).max_abs() < 1e-7);
  }

  // The mate's tangent is scaled, not tilted: it stays Minkowski-orthogonal
  // to the base spacelike plane.
  for (double s : {-1.0, 0.3, 1.2}) {
    CartanFrame bf = frame_at(*base, s);
    CartanFrame mf = frame_at(*result.mate, std::sqrt(2.0) * s);
    CHECK(std::abs(mink_dot(mf.L, bf.W1)) < 1e-8);
    CHECK(std::abs(mink_dot(mf.L, bf.W2)) < 1e-8);
  }
}

TEST_CASE("case-II mate construction") {
  ExampleParams p{1, 2};
  CurvePtr base = make_expr_curve(example_curve(p));
  std::vector<double> grid = linspace(-1.5, 1.5, 20);

  double alpha = 1.0 / 3.0, beta = -0.25;
  MateResult result = construct_mate(base, alpha, beta, grid);
  const MateReport& rep = result.report;

  CHECK(rep.which == BertrandCase::case_two);
  CHECK(rep.ell0 * rep.ell0 == doctest::Approx(5.0 / 6.0).epsilon(1e-8));
  CHECK(rep.predicted_k1_bar == doctest::Approx(1.8).epsilon(1e-9));
  CHECK(rep.predicted_abs_k2_bar == doctest::Approx(2.4).epsilon(1e-9));
  CHECK(rep.max_k1_error < 1e-6);
  CHECK(rep.max_abs_k2_error < 1e-6);

  // Pythagoras-type identity for case II: k1_bar^2 + k2_bar^2 = 1/alpha^2.
  double k1b = rep.measured_k1_bar, k2b = rep.measured_k2_bar;
  CHECK((k1b * k1b + k2b * k2b) * alpha * alpha ==
        doctest::Approx(1.0).epsilon(1e-6));

  CHECK(rep.L_relation_residual < 1e-6);
  CHECK(rep.N_relation_residual < 1e-6);
  CHECK(rep.plane_coincidence_residual < 1e-6);

  // The spacelike plane rotates by tau with cos = -alpha*k1/ell0^2 = -0.6
  // and sin = -alpha*k2/ell0^2 = 0.8.
  CHECK(rep.rotation_angle == doctest::Approx(std::atan2(0.8, -0.6)).epsilon(1e-8));
  CHECK(std::cos(rep.rotation_angle) == doctest::Approx(-0.6).epsilon(1e-8));
  CHECK(std::sin(rep.rotation_angle) == doctest::Approx(0.8).epsilon(1e-8));

  // Positions agree with the closed-form mate.
  ExpectedMate em = expected_mate(p, BertrandCase::case_two);
  CHECK(em.alpha == doctest::Approx(alpha).epsilon(1e-12));
  CHECK(em.beta == doctest::Approx(beta).epsilon(1e-12));
  CHECK(em.slope * em.slope == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CurvePtr closed = make_expr_curve(em.spec);
  for (double sb : linspace(-1.5 * em.slope, 1.5 * em.slope, 9)) {
    Vec4 got = result.mate->jets(sb, 0).position();
    Vec4 want = closed->jets(sb, 0).position();
    CHECK((got - want).max_abs() < 1e-7);
  }
}

TEST_CASE("mate construction rejects inadmissible constants") {
  CurvePtr base = example(1, 2);
  std::vector<double> grid = linspace(-1.5, 1.5, 10);

  CHECK(code_of([&] { construct_mate(base, 0.0, 0.0, grid); }) ==
        ErrorCode::condition);
  CHECK(code_of([&] { construct_mate(base, 0.2, 0.1, grid); }) ==
        ErrorCode::condition);

  std::vector<double> one = {0.0};
  CHECK(code_of([&] { construct_mate(base, 0.0, 0.5, one); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([&] { construct_mate(nullptr, 0.0, 0.5, grid); }) ==
        ErrorCode::invalid_argument);

  // Random draws off the admissible set all fail the same way.
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int done = 0;
  while (done < 20) {
    double alpha = u(rng), beta = u(rng);
    if (alpha == 0.0) continue;
    if (std::abs(alpha * 1.5 + beta * (-2.0) - 1.0) < 1e-3) continue;
    CAPTURE(alpha);
    CAPTURE(beta);
    CHECK(code_of([&] { construct_mate(base, alpha, beta, grid); }) ==
          ErrorCode::condition);
    ++done;
  }
}

TEST_CASE("a varying correspondence slope is rejected") {
  // On a curve with non-constant k2, a case-I offset has varying ds_bar/ds,
  // so the offset cannot be pseudo-arc parametrized with one slope.
  CurvePtr reparam = std::make_shared<PseudoArcReparamCurve>(wavering_curve());
  Interval dom = reparam->domain();
  std::vector<double> grid = linspace(dom.lo + 0.05, dom.hi - 0.05, 8);
  CHECK(code_of([&] { construct_mate(reparam, 0.0, 0.2, grid); }) ==
        ErrorCode::condition);
}

TEST_CASE("plane coincidence residual") {
  CurvePtr curve = example(1, 2);
  CartanFrame f = frame_at(*curve, 0.4);

  // A frame trivially coincides with itself.
  CHECK(plane_coincidence_residual(f, f) < 1e-12);

  // Replacing W1 by the lightlike tangent leaves a large remainder outside
  // the spacelike plane.
  CartanFrame broken = frame_at(*curve, 2.0);
  broken.W1 = broken.L;
  CHECK(plane_coincidence_residual(frame_at(*curve, 2.0), broken) > 0.9);
}
