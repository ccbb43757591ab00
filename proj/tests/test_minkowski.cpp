#include <doctest.h>

#include <cmath>
#include <random>

#include "nbc/corpus.hpp"
#include "nbc/minkowski.hpp"

using namespace nbc;

namespace {

Vec4 random_vec(std::mt19937& rng) {
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  return {{coord(rng), coord(rng), coord(rng), coord(rng)}};
}

}  // namespace

TEST_CASE("indefinite inner product") {
  Vec4 e0{{1, 0, 0, 0}}, e1{{0, 1, 0, 0}};
  CHECK(mink_dot(e0, e0) == -1.0);
  CHECK(mink_dot(e1, e1) == 1.0);

  Vec4 null_vec{{1, 1, 0, 0}};
  CHECK(mink_dot(null_vec, null_vec) == 0.0);

  // The two null frame legs of the example family pair to +1.
  CartanFrame frame = closed_form_frame({1.0, 2.0}, 0.0);
  CHECK(mink_dot(frame.L, frame.N) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("causal classification") {
  CHECK(causal_character({{1, 0, 0, 0}}) == CausalCharacter::timelike);
  CHECK(causal_character({{0, 1, 0, 0}}) == CausalCharacter::spacelike);
  CHECK(causal_character({{1, 1, 0, 0}}) == CausalCharacter::lightlike);
  CHECK(causal_character_name(CausalCharacter::lightlike) ==
        std::string("lightlike"));
}

TEST_CASE("orientation determinant") {
  Vec4 e0{{1, 0, 0, 0}}, e1{{0, 1, 0, 0}}, e2{{0, 0, 1, 0}}, e3{{0, 0, 0, 1}};
  CHECK(det4(e0, e1, e2, e3) == 1.0);
  CHECK(det4(e1, e0, e2, e3) == -1.0);

  CartanFrame frame = closed_form_frame({1.0, 2.0}, 0.0);
  CHECK(det4(frame.L, frame.N, frame.W1, frame.W2) ==
        doctest::Approx(-1.0).epsilon(1e-12));

  // Alternating in every argument pair.
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Vec4 a = random_vec(rng), b = random_vec(rng), c = random_vec(rng),
         d = random_vec(rng);
    double base = det4(a, b, c, d);
    CHECK(det4(b, a, c, d) == doctest::Approx(-base).epsilon(1e-12));
    CHECK(det4(a, c, b, d) == doctest::Approx(-base).epsilon(1e-12));
    CHECK(det4(a, b, d, c) == doctest::Approx(-base).epsilon(1e-12));
  }
}

TEST_CASE("Gram residual against the frame target") {
  // Closed-form frames meet the target exactly.
  for (double s : {-1.5, 0.0, 0.4}) {
    CartanFrame frame = closed_form_frame({1.0, 2.0}, s);
    CHECK(gram_residual(frame.L, frame.N, frame.W1, frame.W2) < 1e-12);
  }

  // (e0, e0, e1, e2): <L,N> = -1 misses its target 1 by 2, the worst entry.
  Vec4 e0{{1, 0, 0, 0}}, e1{{0, 1, 0, 0}}, e2{{0, 0, 1, 0}};
  CHECK(gram_residual(e0, e0, e1, e2) == doctest::Approx(2.0));

  // Scaling L doubles <L,N>: residual 1.
  CartanFrame frame = closed_form_frame({1.0, 2.0}, 0.0);
  Vec4 L2 = 2.0 * frame.L;
  CHECK(gram_residual(L2, frame.N, frame.W1, frame.W2) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inner product is symmetric and bilinear") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> scalar(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    Vec4 u = random_vec(rng), v = random_vec(rng), w = random_vec(rng);
    double lam = scalar(rng);
    CHECK(mink_dot(u, v) == doctest::Approx(mink_dot(v, u)).epsilon(1e-14));
    double lhs = mink_dot(u, lam * v + w);
    double rhs = lam * mink_dot(u, v) + mink_dot(u, w);
    CHECK(std::abs(lhs - rhs) <= 1e-14 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("vector helpers") {
  Vec4 v{{3, -4, 0, 0}};
  CHECK(v.euclidean_norm() == doctest::Approx(5.0));
  CHECK(v.max_abs() == 4.0);
  CHECK((v - v).euclidean_norm() == 0.0);
  CHECK((0.5 * v)[0] == 1.5);
}
