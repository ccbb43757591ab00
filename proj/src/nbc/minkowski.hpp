#pragma once

#include <array>
#include <cmath>

#include "nbc/jet.hpp"

namespace nbc {

// Vector in R^4_1 with metric signature (-,+,+,+); component 0 is timelike.
struct Vec4 {
  std::array<double, 4> v{0.0, 0.0, 0.0, 0.0};

  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

  Vec4 operator+(const Vec4& o) const {
    return {{v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2], v[3] + o.v[3]}};
  }
  Vec4 operator-(const Vec4& o) const {
    return {{v[0] - o.v[0], v[1] - o.v[1], v[2] - o.v[2], v[3] - o.v[3]}};
  }
  Vec4 operator-() const { return {{-v[0], -v[1], -v[2], -v[3]}}; }
  friend Vec4 operator*(double a, const Vec4& u) {
    return {{a * u.v[0], a * u.v[1], a * u.v[2], a * u.v[3]}};
  }

  // Euclidean norms, used for residual sizes (positive-definite, unlike the
  // Minkowski form, so a nonzero defect can never hide in a null direction).
  double euclidean_norm() const {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
  }
  double max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
};

inline double mink_dot(const Vec4& u, const Vec4& w) {
  return -u[0] * w[0] + u[1] * w[1] + u[2] * w[2] + u[3] * w[3];
}

enum class CausalCharacter { timelike, spacelike, lightlike };

// Sign of <v,v> up to tolerance: negative -> timelike, positive -> spacelike,
// |<v,v>| <= tol -> lightlike (null).
inline CausalCharacter causal_character(const Vec4& u, double tol = 1e-12) {
  double q = mink_dot(u, u);
  if (std::abs(q) <= tol) return CausalCharacter::lightlike;
  return q < 0 ? CausalCharacter::timelike : CausalCharacter::spacelike;
}

inline const char* causal_character_name(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::timelike: return "timelike";
    case CausalCharacter::spacelike: return "spacelike";
    case CausalCharacter::lightlike: return "lightlike";
  }
  return "?";
}

// Determinant of the 4x4 matrix with rows a, b, c, d.
double det4(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d);

// Worst deviation of the frame's Minkowski Gram matrix from the target of a
// null frame {L, N, W1, W2}: <L,N> = 1, <W1,W1> = <W2,W2> = 1, all other
// pairings zero.
double gram_residual(const Vec4& L, const Vec4& N, const Vec4& W1,
                     const Vec4& W2);

// Four jets forming a vector-valued expansion; used by the frame algebra so
// frame fields can be differentiated exactly.
using Vec4J = std::array<Jet, 4>;

inline Jet mink_dot(const Vec4J& u, const Vec4J& w) {
  return -(u[0] * w[0]) + u[1] * w[1] + u[2] * w[2] + u[3] * w[3];
}

inline Vec4 value_of(const Vec4J& u) {
  return {{u[0].value(), u[1].value(), u[2].value(), u[3].value()}};
}

// Value of the first derivative of a jet-valued vector field.
inline Vec4 derivative_value_of(const Vec4J& u) {
  return {{u[0].derivative(1), u[1].derivative(1), u[2].derivative(1),
           u[3].derivative(1)}};
}

}  // namespace nbc
