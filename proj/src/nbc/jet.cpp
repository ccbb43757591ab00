#include "nbc/jet.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace nbc {

namespace {

std::size_t uz(int k) { return static_cast<std::size_t>(k); }

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

Jet Jet::variable(double s0, int order) {
  if (order < 1)
    throw_error(ErrorCode::invalid_argument, "jet order must be at least 1");
  std::vector<double> c(uz(order) + 1, 0.0);
  c[0] = s0;
  c[1] = 1.0;
  return Jet(s0, std::move(c));
}

Jet Jet::constant(double s0, int order, double value) {
  if (order < 0)
    throw_error(ErrorCode::invalid_argument, "jet order must be non-negative");
  std::vector<double> c(uz(order) + 1, 0.0);
  c[0] = value;
  return Jet(s0, std::move(c));
}

Jet Jet::from_coefficients(double s0, std::vector<double> coefficients) {
  if (coefficients.empty())
    throw_error(ErrorCode::invalid_argument, "a jet needs at least one coefficient");
  return Jet(s0, std::move(coefficients));
}

double Jet::derivative(int k) const {
  if (k < 0 || k > order())
    throw_error(ErrorCode::invalid_argument, "derivative order exceeds jet order");
  return factorial(k) * c_[uz(k)];
}

Jet Jet::truncated(int order) const {
  if (order < 0 || order > this->order())
    throw_error(ErrorCode::invalid_argument, "cannot truncate jet to a longer order");
  std::vector<double> c(c_.begin(), c_.begin() + order + 1);
  return Jet(s0_, std::move(c));
}

Jet Jet::derivative_jet() const {
  if (order() < 1)
    throw_error(ErrorCode::invalid_argument, "cannot differentiate an order-0 jet");
  std::vector<double> c(uz(order()));
  for (int k = 1; k <= order(); ++k) c[uz(k - 1)] = k * c_[uz(k)];
  return Jet(s0_, std::move(c));
}

void Jet::require_same_point(const Jet& a, const Jet& b) {
  if (a.s0_ != b.s0_)
    throw_error(ErrorCode::invalid_argument,
                "jets expanded at different base points cannot be combined");
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (double& x : r.c_) x = -x;
  return r;
}

Jet& Jet::operator+=(const Jet& rhs) {
  require_same_point(*this, rhs);
  if (rhs.order() < order()) c_.resize(rhs.c_.size());
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += rhs.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  require_same_point(*this, rhs);
  if (rhs.order() < order()) c_.resize(rhs.c_.size());
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= rhs.c_[k];
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet::require_same_point(a, b);
  int n = std::min(a.order(), b.order());
  std::vector<double> c(uz(n) + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += a.c_[uz(j)] * b.c_[uz(k - j)];
    c[uz(k)] = acc;
  }
  return Jet(a.s0_, std::move(c));
}

Jet operator/(const Jet& a, const Jet& b) {
  Jet::require_same_point(a, b);
  if (b.value() == 0.0)
    throw_error(ErrorCode::domain, "jet division by a jet whose value is zero");
  int n = std::min(a.order(), b.order());
  std::vector<double> q(uz(n) + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    double acc = a.c_[uz(k)];
    for (int j = 1; j <= k; ++j) acc -= b.c_[uz(j)] * q[uz(k - j)];
    q[uz(k)] = acc / b.c_[0];
  }
  return Jet(a.s0_, std::move(q));
}

Jet operator+(Jet a, double b) {
  a.c_[0] += b;
  return a;
}

Jet operator*(Jet a, double b) {
  for (double& x : a.c_) x *= b;
  return a;
}

Jet operator/(Jet a, double b) {
  if (b == 0.0) throw_error(ErrorCode::domain, "jet division by zero scalar");
  for (double& x : a.c_) x /= b;
  return a;
}

Jet operator/(double a, const Jet& b) {
  return Jet::constant(b.base_point(), b.order(), a) / b;
}

Jet sqrt(const Jet& u) {
  if (!(u.value() > 0.0))
    throw_error(ErrorCode::domain, "sqrt of a non-positive value");
  std::vector<double> w(u.c_.size(), 0.0);
  w[0] = std::sqrt(u.c_[0]);
  for (int k = 1; k <= u.order(); ++k) {
    double acc = u.c_[uz(k)];
    for (int j = 1; j < k; ++j) acc -= w[uz(j)] * w[uz(k - j)];
    w[uz(k)] = acc / (2.0 * w[0]);
  }
  return Jet(u.s0_, std::move(w));
}

Jet exp(const Jet& u) {
  std::vector<double> w(u.c_.size(), 0.0);
  w[0] = std::exp(u.c_[0]);
  for (int k = 1; k <= u.order(); ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * u.c_[uz(j)] * w[uz(k - j)];
    w[uz(k)] = acc / k;
  }
  return Jet(u.s0_, std::move(w));
}

Jet log(const Jet& u) {
  if (!(u.value() > 0.0))
    throw_error(ErrorCode::domain, "ln of a non-positive value");
  std::vector<double> w(u.c_.size(), 0.0);
  w[0] = std::log(u.c_[0]);
  for (int k = 1; k <= u.order(); ++k) {
    double acc = k * u.c_[uz(k)];
    for (int j = 1; j < k; ++j) acc -= j * w[uz(j)] * u.c_[uz(k - j)];
    w[uz(k)] = acc / (k * u.c_[0]);
  }
  return Jet(u.s0_, std::move(w));
}

namespace {

// sin and cos (or sinh and cosh) share one coupled recurrence.
void circular_pair(const Jet& u, double f0, double g0, double sign,
                   std::vector<double>& f, std::vector<double>& g) {
  f.assign(uz(u.order()) + 1, 0.0);
  g.assign(uz(u.order()) + 1, 0.0);
  f[0] = f0;
  g[0] = g0;
  for (int k = 1; k <= u.order(); ++k) {
    double af = 0.0, ag = 0.0;
    for (int j = 1; j <= k; ++j) {
      af += j * u.coeff(j) * g[uz(k - j)];
      ag += j * u.coeff(j) * f[uz(k - j)];
    }
    f[uz(k)] = af / k;
    g[uz(k)] = sign * ag / k;
  }
}

}  // namespace

Jet sin(const Jet& u) {
  std::vector<double> f, g;
  circular_pair(u, std::sin(u.value()), std::cos(u.value()), -1.0, f, g);
  return Jet(u.s0_, std::move(f));
}

Jet cos(const Jet& u) {
  std::vector<double> f, g;
  circular_pair(u, std::sin(u.value()), std::cos(u.value()), -1.0, f, g);
  return Jet(u.s0_, std::move(g));
}

Jet sinh(const Jet& u) {
  std::vector<double> f, g;
  circular_pair(u, std::sinh(u.value()), std::cosh(u.value()), 1.0, f, g);
  return Jet(u.s0_, std::move(f));
}

Jet cosh(const Jet& u) {
  std::vector<double> f, g;
  circular_pair(u, std::sinh(u.value()), std::cosh(u.value()), 1.0, f, g);
  return Jet(u.s0_, std::move(g));
}

Jet pow(const Jet& u, double e) {
  double rounded = std::nearbyint(e);
  if (rounded == e && std::abs(e) <= 64.0) {
    int n = static_cast<int>(rounded);
    Jet acc = Jet::constant(u.base_point(), u.order(), 1.0);
    Jet base = u;
    int m = n < 0 ? -n : n;
    while (m > 0) {  // binary exponentiation on the truncated ring
      if (m & 1) acc = acc * base;
      base = base * base;
      m >>= 1;
    }
    if (n < 0) return 1.0 / acc;
    return acc;
  }
  if (!(u.value() > 0.0))
    throw_error(ErrorCode::domain,
                "fractional power of a non-positive base");
  return exp(e * log(u));
}

Jet compose(const Jet& outer, const Jet& inner) {
  if (std::abs(inner.value() - outer.base_point()) > 1e-9)
    throw_error(ErrorCode::invalid_argument,
                "composition requires inner value == outer base point");
  int n = std::min(outer.order(), inner.order());
  // Horner evaluation of the outer polynomial in powers of (inner - t0).
  Jet shifted = inner.truncated(n) + (-outer.base_point());
  Jet acc = Jet::constant(inner.base_point(), n, outer.coeff(n));
  for (int k = n - 1; k >= 0; --k) acc = acc * shifted + outer.coeff(k);
  return acc;
}

Jet invert_series(const Jet& phi) {
  if (phi.order() < 1)
    throw_error(ErrorCode::invalid_argument, "cannot invert an order-0 jet");
  if (phi.coeff(1) == 0.0)
    throw_error(ErrorCode::domain, "cannot invert a jet with zero slope");
  int n = phi.order();
  double s_bar0 = phi.value();
  double t0 = phi.base_point();
  // Work one order higher so that phi' is available at full working order.
  // The padded top coefficient is arbitrary, but psi - t0 has exact
  // valuation 1 throughout the iteration, so it never reaches coefficients
  // at or below the working order; the excess order is dropped at the end.
  std::vector<double> padded = phi.c_;
  padded.push_back(0.0);
  Jet phi_pad(t0, std::move(padded));
  Jet dphi = phi_pad.derivative_jet();
  Jet x = Jet::variable(s_bar0, n + 1);
  // First-order seed t0 + (x - s_bar0)/phi'; each Newton step doubles the
  // number of correct coefficients.
  Jet psi = (x - s_bar0) / phi.coeff(1) + t0;
  int steps = 1;
  while ((1 << steps) < n + 1) ++steps;
  for (int i = 0; i < steps + 1; ++i) {
    Jet residual = compose(phi_pad, psi) - x;
    Jet slope = compose(dphi, psi);
    psi = psi - residual / slope;
  }
  return psi.truncated(n);
}

double finite_difference_derivative(const std::function<double(double)>& f,
                                    double s0, int k, double h) {
  if (!(h > 0.0))
    throw_error(ErrorCode::invalid_argument, "finite-difference step must be positive");
  switch (k) {
    case 1:
      return (f(s0 + h) - f(s0 - h)) / (2.0 * h);
    case 2:
      return (f(s0 + h) - 2.0 * f(s0) + f(s0 - h)) / (h * h);
    case 3:
      return (f(s0 + 2.0 * h) - 2.0 * f(s0 + h) + 2.0 * f(s0 - h) -
              f(s0 - 2.0 * h)) /
             (2.0 * h * h * h);
    case 4:
      return (f(s0 + 2.0 * h) - 4.0 * f(s0 + h) + 6.0 * f(s0) -
              4.0 * f(s0 - h) + f(s0 - 2.0 * h)) /
             (h * h * h * h);
    default:
      throw_error(ErrorCode::invalid_argument,
                  "finite differences implemented for orders 1..4");
  }
}

}  // namespace nbc
