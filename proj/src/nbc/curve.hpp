#pragma once

#include <array>
#include <limits>
#include <map>
#include <memory>
#include <string>

#include "nbc/expr.hpp"
#include "nbc/minkowski.hpp"
#include "nbc/settings.hpp"

namespace nbc {

enum class Parametrization { pseudo_arc, general };

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  // Endpoint membership is tested with a small slack so grids whose end
  // values are reconstructed in floating point still count as inside.
  bool contains(double s) const {
    double slack = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    return s >= lo - slack && s <= hi + slack;
  }
};

// A curve description as read from a spec document: four component
// expressions of the parameter `s`, named constants they may reference, the
// declared parametrization, and the parameter interval.
struct CurveSpec {
  std::string name;
  std::map<std::string, double> constants;
  std::array<std::string, 4> components;
  std::array<AstPtr, 4> parsed;
  Parametrization parametrization = Parametrization::pseudo_arc;
  Interval domain;
};

// Parses and validates a spec document (see README for the format) and
// binds every identifier: anything other than `s` must appear in constants.
CurveSpec parse_curve_spec(const std::string& text);
CurveSpec load_curve_spec(const std::string& path);
std::string curve_spec_to_json(const CurveSpec& spec);

// Truncated expansion of a curve at parameter value s: four component jets
// of a common order.
struct CurveJet {
  double s = 0.0;
  std::array<Jet, 4> components;

  int order() const { return components[0].order(); }
  Vec4 position() const {
    return {{components[0].value(), components[1].value(),
             components[2].value(), components[3].value()}};
  }
  // Value of the k-th derivative vector, k <= order().
  Vec4 derivative(int k) const {
    return {{components[0].derivative(k), components[1].derivative(k),
             components[2].derivative(k), components[3].derivative(k)}};
  }
  // Componentwise expansions of the k-th derivative (order drops by k).
  Vec4J derivative_jets(int k) const {
    Vec4J out = components;
    for (int i = 0; i < k; ++i)
      for (Jet& j : out) j = j.derivative_jet();
    return out;
  }
};

// Evaluable curve in R^4_1.  Implementations are immutable; evaluations at
// distinct parameters are independent, so concurrent reads are safe.
class Curve {
 public:
  virtual ~Curve() = default;
  // Expansion of the curve at s, truncated at `order` (>= 0).  Throws
  // Error{out_of_domain} if s lies outside the parameter interval.
  virtual CurveJet jets(double s, int order) const = 0;
  virtual Interval domain() const = 0;
  virtual const std::string& name() const = 0;
};

using CurvePtr = std::shared_ptr<const Curve>;

class ExprCurve final : public Curve {
 public:
  explicit ExprCurve(CurveSpec spec);

  CurveJet jets(double s, int order) const override;
  Interval domain() const override { return spec_.domain; }
  const std::string& name() const override { return spec_.name; }
  const CurveSpec& spec() const { return spec_; }

 private:
  CurveSpec spec_;
};

CurvePtr make_expr_curve(CurveSpec spec);

// --- pseudo-arc diagnostics and reparametrization ---------------------------

// null_residual = |<c',c'>|, unit_residual = |<c'',c''> - 1| at s.
struct PseudoArcResidual {
  double null_residual = 0.0;
  double unit_residual = 0.0;
};

PseudoArcResidual pseudo_arc_residual(const Curve& curve, double s);

// Worst residuals over an evenly spaced grid covering the whole domain,
// plus the smallest <c'',c''> seen (a value near zero means the curve fails
// to bend and no Cartan frame can exist under any parametrization).
struct ValidationReport {
  double worst_null = 0.0;
  double worst_unit = 0.0;
  double min_acceleration_norm2 = std::numeric_limits<double>::infinity();

  bool null_ok(double tol) const { return worst_null < tol; }
  bool pseudo_arc_ok(double tol) const { return worst_null < tol && worst_unit < tol; }
};

ValidationReport validate_curve(const Curve& curve, int samples,
                                const Settings& settings = default_settings());

// Pseudo-arc length of the curve between t0 and t1 (t0 <= t1): the integral
// of <c'',c''>^(1/4).  Adaptive Simpson quadrature to `abs_tol`; throws
// Error{quadrature} if the integrand is non-positive somewhere or the
// tolerance cannot be met.
double pseudo_arc_length(const Curve& curve, double t0, double t1,
                         double abs_tol = default_settings().quadrature_tol);

// Solves pseudo_arc_length(curve, t0, t) == sigma for t (sigma >= 0) with a
// safeguarded Newton iteration (bisection fallback).  Throws Error{range} if
// sigma exceeds the length of the remaining domain.
double invert_arc(const Curve& curve, double t0, double sigma,
                  double abs_tol = default_settings().quadrature_tol);

// --- derived curves ----------------------------------------------------------

// c_bar(s) = c(s) + alpha*W1(s) + beta*W2(s), where {W1, W2} are the
// spacelike Cartan frame fields of the base.  The base must be pseudo-arc
// parametrized for the frame fields to mean anything; construction samples
// the domain and refuses degenerate bases (k2 = 0 somewhere).
class OffsetCurve final : public Curve {
 public:
  OffsetCurve(CurvePtr base, double alpha, double beta,
              const Settings& settings = default_settings());

  CurveJet jets(double s, int order) const override;
  Interval domain() const override { return base_->domain(); }
  const std::string& name() const override { return name_; }

  const CurvePtr& base() const { return base_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

 private:
  CurvePtr base_;
  double alpha_;
  double beta_;
  double degenerate_tol_;
  std::string name_;
};

// base(s_bar / slope) for a constant slope > 0: the exact reparametrization
// of a curve whose pseudo-arc integrand is constant.  Maps the base domain
// [lo, hi] onto [slope*lo, slope*hi].
class AffineReparamCurve final : public Curve {
 public:
  AffineReparamCurve(CurvePtr base, double slope, std::string name);

  CurveJet jets(double s_bar, int order) const override;
  Interval domain() const override;
  const std::string& name() const override { return name_; }
  double slope() const { return slope_; }

 private:
  CurvePtr base_;
  double slope_;
  std::string name_;
};

// General pseudo-arc reparametrization for curves declared with an arbitrary
// (null, bending) parametrization: s_bar(t) accumulates <c'',c''>^(1/4) from
// the domain start, and evaluation composes the base expansion with the
// series of the inverse map.  Domain becomes [0, total length].
class PseudoArcReparamCurve final : public Curve {
 public:
  explicit PseudoArcReparamCurve(CurvePtr base,
                                 const Settings& settings = default_settings());

  CurveJet jets(double s_bar, int order) const override;
  Interval domain() const override { return {0.0, total_}; }
  const std::string& name() const override { return name_; }
  const CurvePtr& base() const { return base_; }

 private:
  CurvePtr base_;
  double total_;
  double quad_tol_;
  std::string name_;
};

}  // namespace nbc
