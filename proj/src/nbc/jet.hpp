#pragma once

#include <functional>
#include <vector>

#include "nbc/errors.hpp"

namespace nbc {

// Truncated Taylor expansion of a scalar function about a base point s0.
// coeff(k) stores f^(k)(s0)/k!, k = 0..order.  Arithmetic propagates whole
// expansions, so evaluating a formula on Jet::variable(s0, K) yields the
// first K derivatives of the formula at s0 in one pass, exactly (up to
// roundoff) rather than by difference quotients.
//
// Binary operations require equal base points; if the operands carry
// different truncation orders the result is truncated to the shorter one,
// which is the longest expansion both operands can support.
class Jet {
 public:
  Jet() : s0_(0.0), c_(1, 0.0) {}

  // The identity function s |-> s expanded at s0: (s0, 1, 0, ..., 0).
  static Jet variable(double s0, int order);
  static Jet constant(double s0, int order, double value);
  // coefficients[k] = f^(k)(s0)/k!; must be non-empty.
  static Jet from_coefficients(double s0, std::vector<double> coefficients);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double base_point() const { return s0_; }
  double value() const { return c_[0]; }
  double coeff(int k) const { return c_[static_cast<std::size_t>(k)]; }
  // f^(k)(s0) = k! * coeff(k)
  double derivative(int k) const;

  Jet truncated(int order) const;
  // Expansion of f', one order shorter.
  Jet derivative_jet() const;

  Jet operator-() const;
  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  friend Jet operator+(Jet a, double b);
  friend Jet operator+(double a, Jet b) { return std::move(b) + a; }
  friend Jet operator-(Jet a, double b) { return std::move(a) + (-b); }
  friend Jet operator-(double a, const Jet& b) { return -b + a; }
  friend Jet operator*(Jet a, double b);
  friend Jet operator*(double a, Jet b) { return std::move(b) * a; }
  friend Jet operator/(Jet a, double b);
  friend Jet operator/(double a, const Jet& b);

 private:
  Jet(double s0, std::vector<double> c) : s0_(s0), c_(std::move(c)) {}
  static void require_same_point(const Jet& a, const Jet& b);

  double s0_;
  std::vector<double> c_;

  friend Jet sqrt(const Jet&);
  friend Jet exp(const Jet&);
  friend Jet log(const Jet&);
  friend Jet sin(const Jet&);
  friend Jet cos(const Jet&);
  friend Jet sinh(const Jet&);
  friend Jet cosh(const Jet&);
  friend Jet pow(const Jet&, double);
  friend Jet compose(const Jet&, const Jet&);
  friend Jet invert_series(const Jet&);
};

Jet sqrt(const Jet& u);  // requires u(s0) > 0
Jet exp(const Jet& u);
Jet log(const Jet& u);  // requires u(s0) > 0
Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet sinh(const Jet& u);
Jet cosh(const Jet& u);
// Integer exponents work for any base (including zero/negative); fractional
// exponents require a positive base and route through exp(e*log(u)).
Jet pow(const Jet& u, double e);

// Expansion of outer(inner(x)) about inner's base point.  inner's value must
// equal outer's base point.
Jet compose(const Jet& outer, const Jet& inner);

// Expansion of the inverse function of phi about phi's value; requires
// phi'(t0) != 0.  invert_series(phi).value() == phi.base_point().
Jet invert_series(const Jet& phi);

// Central finite-difference estimate of f^(k)(s0), k = 1..4, with error
// O(h^2).  Deliberately independent of the Jet machinery so it can serve as
// a cross-check oracle for it.
double finite_difference_derivative(const std::function<double(double)>& f,
                                    double s0, int k, double h);

}  // namespace nbc
