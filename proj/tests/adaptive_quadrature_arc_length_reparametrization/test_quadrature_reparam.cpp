#include <doctest.h>

#include <cmath>
#include <functional>
#include <memory>
#include <random>

#include "nbc/corpus.hpp"
#include "nbc/curve.hpp"
#include "nbc/frame.hpp"
#include "nbc/util.hpp"

using namespace nbc;

namespace {

CurvePtr base_curve() {
  return make_expr_curve(example_curve(ExampleParams{1, 2}));
}

CurvePtr scaled_curve(double lam) {
  return make_expr_curve(scaled_example(ExampleParams{1, 2}, lam));
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

TEST_CASE("arc length of a unit-acceleration curve is the interval length") {
  CurvePtr curve = base_curve();
  CHECK(std::abs(pseudo_arc_length(*curve, 0.0, 1.0) - 1.0) < 1e-10);
  CHECK(std::abs(pseudo_arc_length(*curve, -2.0, 2.0) - 4.0) < 1e-10);
  CHECK(pseudo_arc_length(*curve, 0.5, 0.5) == doctest::Approx(0.0));
  // Reversed endpoints are a caller error, not a negative length.
  CHECK(code_of([&] { pseudo_arc_length(*curve, 1.0, 0.0); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("arc length scales linearly in the speed factor") {
  for (double lam : {0.5, 2.0, 3.0}) {
    CurvePtr curve = scaled_curve(lam);
    Interval dom = curve->domain();
    double expected = lam * (dom.hi - dom.lo);
    CHECK(std::abs(pseudo_arc_length(*curve, dom.lo, dom.hi) - expected) <
          1e-10);
    double expected_half = lam * (0.4 - dom.lo);
    CHECK(std::abs(pseudo_arc_length(*curve, dom.lo, 0.4) - expected_half) <
          1e-10);
  }
}

TEST_CASE("arc length is additive") {
  CurvePtr curve = scaled_curve(2.0);
  double whole = pseudo_arc_length(*curve, -1.0, 1.0);
  double split = pseudo_arc_length(*curve, -1.0, -0.3) +
                 pseudo_arc_length(*curve, -0.3, 1.0);
  CHECK(std::abs(whole - split) < 1e-9);
}

TEST_CASE("arc length rejects curves with vanishing acceleration") {
  const char* line_text = R"({
    "name": "line", "constants": {},
    "components": ["s", "s", "0", "0"],
    "parametrization": "general", "domain": [-2.0, 2.0]
  })";
  CurvePtr line = make_expr_curve(parse_curve_spec(line_text));
  CHECK(code_of([&] { pseudo_arc_length(*line, 0.0, 1.0); }) ==
        ErrorCode::quadrature);
}

TEST_CASE("arc length inversion") {
  CurvePtr curve = scaled_curve(2.0);  // ds_bar/dt = 2 on [-1, 1]

  CHECK(std::abs(invert_arc(*curve, 0.0, 1.0) - 0.5) < 1e-9);
  CHECK(invert_arc(*curve, -0.7, 0.0) == doctest::Approx(-0.7));

  // Asking for more length than the domain holds is a range error.
  CHECK(code_of([&] { invert_arc(*curve, 0.0, 40.0); }) == ErrorCode::range);
  CHECK(code_of([&] { invert_arc(*curve, 0.0, -1.0); }) ==
        ErrorCode::invalid_argument);

  // Round trip: invert then re-measure, at random targets.
  std::mt19937 rng(123);
  std::uniform_real_distribution<double> t0s(-1.0, 0.0);
  std::uniform_real_distribution<double> fractions(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    double t0 = t0s(rng);
    double available = pseudo_arc_length(*curve, t0, 1.0);
    double sigma = fractions(rng) * available;
    double t = invert_arc(*curve, t0, sigma);
    CAPTURE(t0);
    CAPTURE(sigma);
    CHECK(std::abs(pseudo_arc_length(*curve, t0, t) - sigma) < 1e-9);
  }
}

TEST_CASE("pseudo-arc reparametrization normalizes a scaled curve") {
  CurvePtr scaled = scaled_curve(2.0);
  auto reparam = std::make_shared<PseudoArcReparamCurve>(scaled);

  // Total length 4, measured from the left end.
  Interval dom = reparam->domain();
  CHECK(dom.lo == doctest::Approx(0.0));
  CHECK(dom.hi == doctest::Approx(4.0).epsilon(1e-10));

  // The reparametrized curve retraces the reference curve shifted by 2:
  // both are pseudo-arc parametrizations of the same point set.
  CurvePtr reference = base_curve();
  for (double sb : linspace(0.0, 4.0, 17)) {
    Vec4 got = reparam->jets(sb, 0).position();
    Vec4 want = reference->jets(sb - 2.0, 0).position();
    CHECK((got - want).max_abs() < 1e-9);
  }

  // After reparametrization the pseudo-arc residuals vanish and the frame
  // machinery accepts the curve.
  for (double sb : linspace(0.2, 3.8, 7)) {
    PseudoArcResidual res = pseudo_arc_residual(*reparam, sb);
    CHECK(res.null_residual < 1e-8);
    CHECK(res.unit_residual < 1e-8);
    CartanFrame f = frame_at(*reparam, sb);
    CHECK(f.k1 == doctest::Approx(1.5).epsilon(1e-7));
    CHECK(f.k2 == doctest::Approx(-2.0).epsilon(1e-7));
  }
}

TEST_CASE("affine reparametrization is exact") {
  CurvePtr curve = base_curve();
  auto affine = std::make_shared<AffineReparamCurve>(curve, 2.0, "stretched");

  CHECK(affine->name() == "stretched");
  CHECK(affine->slope() == 2.0);
  Interval dom = affine->domain();
  CHECK(dom.lo == doctest::Approx(-4.0));
  CHECK(dom.hi == doctest::Approx(4.0));

  for (double sb : {-3.0, -0.5, 0.0, 2.2}) {
    CurveJet slow = affine->jets(sb, 4);
    CurveJet fast = curve->jets(sb / 2.0, 4);
    CHECK((slow.position() - fast.position()).max_abs() < 1e-14);
    // Chain rule: each derivative picks up a factor (1/slope)^k.
    for (int k = 1; k <= 4; ++k) {
      Vec4 want = std::pow(0.5, k) * fast.derivative(k);
      CHECK((slow.derivative(k) - want).max_abs() < 1e-13);
    }
  }

  // Slope 1/2 makes the scaled example pseudo-arc again: lengths agree.
  CurvePtr scaled = scaled_curve(2.0);
  auto fixed = std::make_shared<AffineReparamCurve>(scaled, 2.0, "fixed");
  CHECK(std::abs(pseudo_arc_length(*fixed, 0.0, 1.0) - 1.0) < 1e-9);
  PseudoArcResidual res = pseudo_arc_residual(*fixed, 0.3);
  CHECK(res.null_residual < 1e-12);
  CHECK(res.unit_residual < 1e-10);
}
