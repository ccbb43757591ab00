#include <doctest.h>

#include <cmath>
#include <random>

#include "fd_oracle.hpp"
#include "nbc/expr.hpp"
#include "nbc/jet.hpp"

using namespace nbc;

namespace {

Jet random_jet(std::mt19937& rng, double s0, int order, bool nonzero_value) {
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::vector<double> c(static_cast<std::size_t>(order) + 1);
  for (double& x : c) x = coeff(rng);
  if (nonzero_value && std::abs(c[0]) < 0.25) c[0] = c[0] < 0 ? -1.0 : 1.0;
  return Jet::from_coefficients(s0, std::move(c));
}

}  // namespace

TEST_CASE("variable jets") {
  Jet v = Jet::variable(2.0, 3);
  CHECK(v.order() == 3);
  CHECK(v.coeff(0) == 2.0);
  CHECK(v.coeff(1) == 1.0);
  CHECK(v.coeff(2) == 0.0);
  CHECK(v.coeff(3) == 0.0);

  v = Jet::variable(0.0, 1);
  CHECK(v.order() == 1);
  CHECK(v.coeff(0) == 0.0);
  CHECK(v.coeff(1) == 1.0);

  v = Jet::variable(-1.5, 5);
  CHECK(v.order() == 5);
  CHECK(v.coeff(0) == -1.5);
  CHECK(v.coeff(1) == 1.0);
  for (int k = 2; k <= 5; ++k) CHECK(v.coeff(k) == 0.0);

  CHECK(v.derivative(0) == -1.5);
  CHECK(v.derivative(1) == 1.0);
}

TEST_CASE("jet arithmetic") {
  // (1+s)*(1+s) at s0 = 0, order 2 -> (1, 2, 1).
  Jet s = Jet::variable(0.0, 2);
  Jet p = (1.0 + s) * (1.0 + s);
  CHECK(p.coeff(0) == 1.0);
  CHECK(p.coeff(1) == 2.0);
  CHECK(p.coeff(2) == 1.0);

  // f/f is the constant 1.
  Jet f = Jet::from_coefficients(0.0, {2.0, 3.0, 5.0});
  Jet q = f / f;
  CHECK(q.coeff(0) == doctest::Approx(1.0));
  CHECK(q.coeff(1) == doctest::Approx(0.0));
  CHECK(q.coeff(2) == doctest::Approx(0.0));

  // Division needs a nonzero leading coefficient.
  Jet zero_lead = Jet::from_coefficients(0.0, {0.0, 1.0, 0.0});
  CHECK_THROWS_AS(zero_lead / zero_lead, Error);
  try {
    (void)(zero_lead / zero_lead);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::domain);
  }
}

TEST_CASE("elementary functions") {
  // exp at 0: coefficients 1/k!.
  Jet e = exp(Jet::variable(0.0, 3));
  CHECK(e.coeff(0) == doctest::Approx(1.0));
  CHECK(e.coeff(1) == doctest::Approx(1.0));
  CHECK(e.coeff(2) == doctest::Approx(0.5));
  CHECK(e.coeff(3) == doctest::Approx(1.0 / 6.0));

  // sinh at 0: odd coefficients 1/k!.
  Jet sh = sinh(Jet::variable(0.0, 4));
  CHECK(sh.coeff(0) == doctest::Approx(0.0));
  CHECK(sh.coeff(1) == doctest::Approx(1.0));
  CHECK(sh.coeff(2) == doctest::Approx(0.0));
  CHECK(sh.coeff(3) == doctest::Approx(1.0 / 6.0));
  CHECK(sh.coeff(4) == doctest::Approx(0.0));

  // sqrt at 4: (2, 1/4, -1/64).
  Jet r = sqrt(Jet::variable(4.0, 2));
  CHECK(r.coeff(0) == doctest::Approx(2.0));
  CHECK(r.coeff(1) == doctest::Approx(0.25));
  CHECK(r.coeff(2) == doctest::Approx(-0.015625));

  // ln inverts exp.
  Jet x = Jet::variable(0.7, 6);
  Jet roundtrip = log(exp(x));
  for (int k = 0; k <= 6; ++k)
    CHECK(roundtrip.coeff(k) == doctest::Approx(x.coeff(k)).epsilon(1e-13));

  // Integer powers accept negative bases; fractional powers do not.
  Jet neg = Jet::variable(-2.0, 3);
  Jet sq = pow(neg, 2.0);
  CHECK(sq.coeff(0) == doctest::Approx(4.0));
  CHECK(sq.coeff(1) == doctest::Approx(-4.0));
  CHECK(sq.coeff(2) == doctest::Approx(1.0));
  CHECK_THROWS_AS(pow(neg, 0.5), Error);

  // Domain gates on sqrt/ln.
  CHECK_THROWS_AS(sqrt(Jet::variable(-1.0, 2)), Error);
  CHECK_THROWS_AS(log(Jet::variable(0.0, 2)), Error);
}

TEST_CASE("finite-difference oracle") {
  CHECK(std::abs(finite_difference_derivative(
            [](double t) { return std::sinh(t); }, 0.0, 1, 1e-4) -
        1.0) < 1e-8);
  CHECK(std::abs(finite_difference_derivative(
            [](double t) { return t * t; }, 3.0, 2, 1e-3) -
        2.0) < 1e-6);
  CHECK(std::abs(finite_difference_derivative(
            [](double t) { return std::sin(t); }, 0.0, 3, 1e-2) -
        (-1.0)) < 1e-3);
  CHECK_THROWS_AS(finite_difference_derivative(
                      [](double t) { return t; }, 0.0, 5, 1e-2),
                  Error);
}

TEST_CASE("jet arithmetic is a commutative ring") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    double s0 = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    Jet a = random_jet(rng, s0, 6, false);
    Jet b = random_jet(rng, s0, 6, false);
    Jet c = random_jet(rng, s0, 6, false);

    Jet ab = a * b, ba = b * a;
    Jet lhs = a * (b + c);
    Jet rhs = a * b + a * c;
    for (int k = 0; k <= 6; ++k) {
      CHECK(std::abs(ab.coeff(k) - ba.coeff(k)) <= 1e-14);
      CHECK(std::abs(lhs.coeff(k) - rhs.coeff(k)) <=
            1e-14 * std::max(1.0, std::abs(lhs.coeff(k))));
    }
  }
}

TEST_CASE("sin^2 + cos^2 is the constant one") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    double s0 = std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
    Jet x = Jet::variable(s0, 8);
    Jet unit = sin(x) * sin(x) + cos(x) * cos(x);
    CHECK(std::abs(unit.coeff(0) - 1.0) < 1e-12);
    for (int k = 1; k <= 8; ++k) CHECK(std::abs(unit.coeff(k)) < 1e-12);
  }
}

TEST_CASE("composition and series inversion") {
  // exp(sin(x)) via compose matches direct evaluation.
  double s0 = 0.4;
  Jet x = Jet::variable(s0, 7);
  Jet inner = sin(x);
  Jet outer = exp(Jet::variable(inner.value(), 7));
  Jet composed = compose(outer, inner);
  Jet direct = exp(sin(x));
  for (int k = 0; k <= 7; ++k)
    CHECK(composed.coeff(k) ==
          doctest::Approx(direct.coeff(k)).epsilon(1e-13));

  // invert_series: phi(t) = t + t^2 at t0 = 0.5; psi = phi^{-1} at phi(0.5).
  Jet t = Jet::variable(0.5, 6);
  Jet phi = t + t * t;
  Jet psi = invert_series(phi);
  CHECK(psi.base_point() == doctest::Approx(phi.value()));
  CHECK(psi.value() == doctest::Approx(0.5));
  // compose(psi, phi) is the identity in t.
  Jet ident = compose(psi, phi);
  CHECK(ident.coeff(0) == doctest::Approx(0.5));
  CHECK(ident.coeff(1) == doctest::Approx(1.0));
  for (int k = 2; k <= 6; ++k)
    CHECK(std::abs(ident.coeff(k)) < 1e-12);
  // Exact inverse of t + t^2 is (sqrt(1+4y) - 1)/2; check the first
  // derivative 1/phi'(0.5) = 0.5.
  CHECK(psi.coeff(1) == doctest::Approx(0.5));

  CHECK_THROWS_AS(invert_series(Jet::constant(0.0, 4, 1.0)), Error);
}

TEST_CASE("jet derivatives of the example components match finite differences") {
  const std::map<std::string, double> consts{{"a", 1.0}, {"b", 2.0}};
  const char* exprs[] = {
      "(1/sqrt(a^2+b^2))*(1/a)*sinh(a*s)",
      "(1/sqrt(a^2+b^2))*(1/a)*cosh(a*s)",
      "(1/sqrt(a^2+b^2))*(1/b)*sin(b*s)",
      "(1/sqrt(a^2+b^2))*(1/b)*cos(b*s)",
  };
  for (const char* src : exprs) {
    AstPtr ast = parse(src);
    auto f = [&](double t) { return evaluate(*ast, t, consts); };
    for (double s0 : {-1.3, 0.0, 0.8}) {
      Jet jet = evaluate(*ast, Jet::variable(s0, 6), consts);
      for (int k = 1; k <= 4; ++k) {
        double exact = jet.derivative(k);
        double approx = nbc_test::fd_oracle(f, s0, k);
        CHECK(std::abs(exact - approx) / std::max(1.0, std::abs(exact)) <
              1e-6);
      }
    }
  }
}

TEST_CASE("truncation and derivative jets") {
  Jet x = Jet::variable(0.3, 6);
  Jet f = sinh(x);
  Jet trunc = f.truncated(3);
  CHECK(trunc.order() == 3);
  for (int k = 0; k <= 3; ++k) CHECK(trunc.coeff(k) == f.coeff(k));

  // derivative_jet shifts coefficients: (f')_k = (k+1) f_{k+1}.
  Jet df = f.derivative_jet();
  CHECK(df.order() == 5);
  for (int k = 0; k <= 5; ++k)
    CHECK(df.coeff(k) == doctest::Approx((k + 1) * f.coeff(k + 1)));
  // d/ds sinh = cosh.
  Jet ch = cosh(x).truncated(5);
  for (int k = 0; k <= 5; ++k)
    CHECK(df.coeff(k) == doctest::Approx(ch.coeff(k)).epsilon(1e-14));
}

TEST_CASE("mixed-order operands truncate to the shorter expansion") {
  Jet a = Jet::variable(1.0, 6);
  Jet b = Jet::variable(1.0, 3);
  CHECK((a + b).order() == 3);
  CHECK((a * b).order() == 3);
}

TEST_CASE("base point mismatches are rejected") {
  Jet a = Jet::variable(0.0, 3);
  Jet b = Jet::variable(1.0, 3);
  CHECK_THROWS_AS(a + b, Error);
}
