#include "nbc/curve.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nbc/frame.hpp"
#include "nbc/util.hpp"

namespace nbc {

// --- spec I/O ----------------------------------------------------------------

namespace {

using ordered_json = nlohmann::ordered_json;

void check_in_domain(const Curve& curve, double s) {
  if (!curve.domain().contains(s))
    throw_error(ErrorCode::out_of_domain,
                "parameter " + format_real(s) + " outside domain [" +
                    format_real(curve.domain().lo) + ", " +
                    format_real(curve.domain().hi) + "] of curve '" +
                    curve.name() + "'");
}

AstPtr parse_component(const std::string& src, int index) {
  try {
    return parse(src);
  } catch (const Error& e) {
    std::ostringstream msg;
    msg << "component " << index << ": " << e.what();
    if (e.position() != Error::npos) msg << " (at position " << e.position() << ")";
    throw_error(e.code(), msg.str(), e.position());
  }
}

}  // namespace

CurveSpec parse_curve_spec(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw_error(ErrorCode::parse, std::string("curve spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object())
    throw_error(ErrorCode::parse, "curve spec must be a JSON object");

  CurveSpec spec;
  if (!j.contains("name") || !j["name"].is_string())
    throw_error(ErrorCode::parse, "curve spec needs a string field 'name'");
  spec.name = j["name"].get<std::string>();

  if (j.contains("constants")) {
    if (!j["constants"].is_object())
      throw_error(ErrorCode::parse, "'constants' must map names to numbers");
    for (const auto& [key, value] : j["constants"].items()) {
      if (!value.is_number())
        throw_error(ErrorCode::parse, "constant '" + key + "' must be a number");
      spec.constants[key] = value.get<double>();
    }
    if (spec.constants.count("s"))
      throw_error(ErrorCode::parse, "'s' is the curve parameter and cannot be a constant");
  }

  if (!j.contains("components") || !j["components"].is_array() ||
      j["components"].size() != 4)
    throw_error(ErrorCode::parse, "curve spec needs 'components': an array of 4 expressions");
  for (int i = 0; i < 4; ++i) {
    const auto& c = j["components"][static_cast<std::size_t>(i)];
    if (!c.is_string())
      throw_error(ErrorCode::parse, "components must be expression strings");
    spec.components[static_cast<std::size_t>(i)] = c.get<std::string>();
    spec.parsed[static_cast<std::size_t>(i)] =
        parse_component(spec.components[static_cast<std::size_t>(i)], i);
    for (const std::string& var :
         free_variables(*spec.parsed[static_cast<std::size_t>(i)]))
      if (var != "s" && !spec.constants.count(var))
        throw_error(ErrorCode::parse, "component " + std::to_string(i) +
                                          " references unknown identifier '" +
                                          var + "'");
  }

  if (!j.contains("parametrization") || !j["parametrization"].is_string())
    throw_error(ErrorCode::parse,
                "curve spec needs 'parametrization': \"pseudo_arc\" or \"general\"");
  std::string p = j["parametrization"].get<std::string>();
  if (p == "pseudo_arc")
    spec.parametrization = Parametrization::pseudo_arc;
  else if (p == "general")
    spec.parametrization = Parametrization::general;
  else
    throw_error(ErrorCode::parse, "unknown parametrization '" + p + "'");

  if (!j.contains("domain") || !j["domain"].is_array() || j["domain"].size() != 2 ||
      !j["domain"][0].is_number() || !j["domain"][1].is_number())
    throw_error(ErrorCode::parse, "curve spec needs 'domain': [lo, hi]");
  spec.domain.lo = j["domain"][0].get<double>();
  spec.domain.hi = j["domain"][1].get<double>();
  if (!std::isfinite(spec.domain.lo) || !std::isfinite(spec.domain.hi) ||
      !(spec.domain.lo < spec.domain.hi))
    throw_error(ErrorCode::parse, "domain must be a finite interval with lo < hi");

  return spec;
}

CurveSpec load_curve_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorCode::io, "cannot open curve spec '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw_error(ErrorCode::io, "error reading curve spec '" + path + "'");
  try {
    return parse_curve_spec(buffer.str());
  } catch (const Error& e) {
    throw_error(e.code(), path + ": " + e.what(), e.position());
  }
}

std::string curve_spec_to_json(const CurveSpec& spec) {
  ordered_json j;
  j["name"] = spec.name;
  j["constants"] = ordered_json::object();
  for (const auto& [key, value] : spec.constants) j["constants"][key] = value;
  j["components"] = spec.components;
  j["parametrization"] =
      spec.parametrization == Parametrization::pseudo_arc ? "pseudo_arc" : "general";
  j["domain"] = {spec.domain.lo, spec.domain.hi};
  return j.dump(2) + "\n";
}

// --- expression curves -------------------------------------------------------

ExprCurve::ExprCurve(CurveSpec spec) : spec_(std::move(spec)) {
  for (const AstPtr& p : spec_.parsed)
    if (!p)
      throw_error(ErrorCode::invalid_argument,
                  "curve spec must be parsed before constructing a curve");
}

CurveJet ExprCurve::jets(double s, int order) const {
  check_in_domain(*this, s);
  if (order < 0) throw_error(ErrorCode::invalid_argument, "negative jet order");
  int work_order = std::max(order, 1);  // variable jets start at order 1
  Jet var = Jet::variable(s, work_order);
  CurveJet out;
  out.s = s;
  for (int i = 0; i < 4; ++i) {
    Jet value = evaluate(*spec_.parsed[static_cast<std::size_t>(i)], var,
                         spec_.constants);
    out.components[static_cast<std::size_t>(i)] =
        value.order() > order ? value.truncated(order) : value;
  }
  return out;
}

CurvePtr make_expr_curve(CurveSpec spec) {
  return std::make_shared<ExprCurve>(std::move(spec));
}

// --- pseudo-arc diagnostics ----------------------------------------------------

PseudoArcResidual pseudo_arc_residual(const Curve& curve, double s) {
  CurveJet cj = curve.jets(s, 2);
  Vec4 c1 = cj.derivative(1);
  Vec4 c2 = cj.derivative(2);
  return {std::abs(mink_dot(c1, c1)), std::abs(mink_dot(c2, c2) - 1.0)};
}

ValidationReport validate_curve(const Curve& curve, int samples,
                                const Settings& settings) {
  settings.validate();
  ValidationReport report;
  for (double s : linspace(curve.domain().lo, curve.domain().hi, samples)) {
    CurveJet cj = curve.jets(s, 2);
    Vec4 c1 = cj.derivative(1);
    Vec4 c2 = cj.derivative(2);
    report.worst_null = std::max(report.worst_null, std::abs(mink_dot(c1, c1)));
    report.worst_unit =
        std::max(report.worst_unit, std::abs(mink_dot(c2, c2) - 1.0));
    report.min_acceleration_norm2 =
        std::min(report.min_acceleration_norm2, mink_dot(c2, c2));
  }
  return report;
}

// --- quadrature and arc-length inversion ---------------------------------------

namespace {

// <c'',c''>^(1/4); throws if the curve fails to bend at t.
double pseudo_arc_integrand(const Curve& curve, double t) {
  CurveJet cj = curve.jets(t, 2);
  Vec4 c2 = cj.derivative(2);
  double q = mink_dot(c2, c2);
  if (!(q > 0.0))
    throw_error(ErrorCode::quadrature,
                "pseudo-arc integrand is not positive at t = " + format_real(t) +
                    " (<c'',c''> = " + format_real(q) + ")");
  return std::pow(q, 0.25);
}

struct SimpsonState {
  const Curve& curve;
  int depth_limit = 60;
};

double adaptive_simpson(const SimpsonState& st, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = pseudo_arc_integrand(st.curve, lm);
  double frm = pseudo_arc_integrand(st.curve, rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= st.depth_limit)
    throw_error(ErrorCode::quadrature,
                "quadrature tolerance not reached (integrand too rough)");
  return adaptive_simpson(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adaptive_simpson(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double pseudo_arc_length(const Curve& curve, double t0, double t1, double abs_tol) {
  if (!(abs_tol > 0.0))
    throw_error(ErrorCode::invalid_argument, "quadrature tolerance must be positive");
  if (t1 < t0)
    throw_error(ErrorCode::invalid_argument,
                "pseudo_arc_length needs an interval with t0 <= t1");
  check_in_domain(curve, t0);
  check_in_domain(curve, t1);
  if (t0 == t1) return 0.0;
  SimpsonState st{curve};
  double fa = pseudo_arc_integrand(curve, t0);
  double fm = pseudo_arc_integrand(curve, 0.5 * (t0 + t1));
  double fb = pseudo_arc_integrand(curve, t1);
  double whole = (t1 - t0) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(st, t0, t1, fa, fm, fb, whole, abs_tol, 0);
}

double invert_arc(const Curve& curve, double t0, double sigma, double abs_tol) {
  check_in_domain(curve, t0);
  if (!(sigma >= 0.0))
    throw_error(ErrorCode::invalid_argument, "arc length to invert must be >= 0");
  double hi = curve.domain().hi;
  double quad_tol = std::min(abs_tol, 1e-12);
  double total = pseudo_arc_length(curve, t0, hi, quad_tol);
  if (sigma > total + 1e-9)
    throw_error(ErrorCode::range,
                "arc length " + format_real(sigma) +
                    " exceeds the remaining domain (total " + format_real(total) + ")");
  if (sigma == 0.0) return t0;
  if (sigma >= total) return hi;

  double lo_b = t0, hi_b = hi;  // F(lo_b) <= sigma <= F(hi_b)
  double t = std::min(std::max(t0 + sigma, t0), hi);
  for (int iter = 0; iter < 100; ++iter) {
    double f_val = pseudo_arc_length(curve, t0, t, quad_tol);
    double residual = f_val - sigma;
    if (residual > 0)
      hi_b = t;
    else
      lo_b = t;
    double slope = pseudo_arc_integrand(curve, t);
    double step = -residual / slope;
    double next = t + step;
    if (!(next > lo_b) || !(next < hi_b)) next = 0.5 * (lo_b + hi_b);
    bool converged = std::abs(residual) <= 1e-12 * std::max(1.0, sigma) &&
                     std::abs(next - t) <= 1e-12 * std::max(1.0, std::abs(t));
    t = next;
    if (converged) return t;
  }
  throw_error(ErrorCode::quadrature, "arc-length inversion did not converge");
}

// --- offset curves ---------------------------------------------------------------

OffsetCurve::OffsetCurve(CurvePtr base, double alpha, double beta,
                         const Settings& settings)
    : base_(std::move(base)), alpha_(alpha), beta_(beta),
      degenerate_tol_(settings.tol_degenerate) {
  if (!base_) throw_error(ErrorCode::invalid_argument, "offset curve needs a base");
  settings.validate();
  name_ = base_->name() + "_offset";
  // Probe the frame across the domain now so degenerate bases fail loudly at
  // construction instead of midway through a table.
  Interval d = base_->domain();
  for (double s : linspace(d.lo, d.hi, 9)) {
    CurveJet cj = base_->jets(s, 4);
    (void)cartan_frame_jets(cj, degenerate_tol_);
  }
}

CurveJet OffsetCurve::jets(double s, int order) const {
  check_in_domain(*this, s);
  int work_order = std::max(order, 0);
  CurveJet base_jets = base_->jets(s, work_order + 4);
  FrameJets f = cartan_frame_jets(base_jets, degenerate_tol_);
  CurveJet out;
  out.s = s;
  for (int i = 0; i < 4; ++i) {
    Jet c = base_jets.components[static_cast<std::size_t>(i)].truncated(work_order);
    Jet w1 = f.W1[static_cast<std::size_t>(i)].truncated(work_order);
    out.components[static_cast<std::size_t>(i)] =
        c + alpha_ * w1 + beta_ * f.W2[static_cast<std::size_t>(i)];
  }
  return out;
}

// --- affine reparametrization ------------------------------------------------------

AffineReparamCurve::AffineReparamCurve(CurvePtr base, double slope, std::string name)
    : base_(std::move(base)), slope_(slope), name_(std::move(name)) {
  if (!base_) throw_error(ErrorCode::invalid_argument, "reparametrization needs a base");
  if (!(slope_ > 0.0))
    throw_error(ErrorCode::invalid_argument, "reparametrization slope must be positive");
}

Interval AffineReparamCurve::domain() const {
  return {slope_ * base_->domain().lo, slope_ * base_->domain().hi};
}

CurveJet AffineReparamCurve::jets(double s_bar, int order) const {
  check_in_domain(*this, s_bar);
  double t = s_bar / slope_;
  // Guard roundoff at the ends: t must land inside the base domain.
  t = std::min(std::max(t, base_->domain().lo), base_->domain().hi);
  CurveJet base_jets = base_->jets(t, order);
  CurveJet out;
  out.s = s_bar;
  for (int i = 0; i < 4; ++i) {
    const Jet& src = base_jets.components[static_cast<std::size_t>(i)];
    std::vector<double> coeffs(static_cast<std::size_t>(src.order()) + 1);
    double scale = 1.0;
    for (int k = 0; k <= src.order(); ++k) {
      coeffs[static_cast<std::size_t>(k)] = src.coeff(k) * scale;
      scale /= slope_;
    }
    out.components[static_cast<std::size_t>(i)] =
        Jet::from_coefficients(s_bar, std::move(coeffs));
  }
  return out;
}

// --- general pseudo-arc reparametrization ---------------------------------------------

PseudoArcReparamCurve::PseudoArcReparamCurve(CurvePtr base, const Settings& settings)
    : base_(std::move(base)), quad_tol_(settings.quadrature_tol) {
  if (!base_) throw_error(ErrorCode::invalid_argument, "reparametrization needs a base");
  settings.validate();
  name_ = base_->name() + "_pseudo_arc";
  total_ = pseudo_arc_length(*base_, base_->domain().lo, base_->domain().hi, quad_tol_);
}

CurveJet PseudoArcReparamCurve::jets(double s_bar, int order) const {
  check_in_domain(*this, s_bar);
  double s_clamped = std::min(std::max(s_bar, 0.0), total_);
  double t = invert_arc(*base_, base_->domain().lo, s_clamped, quad_tol_);
  int m = std::max(order, 1);
  CurveJet base_jets = base_->jets(t, m + 1);

  // phi(t) = accumulated pseudo-arc; its derivative expansion comes from the
  // integrand, its value at t is s_bar by construction of t.
  Vec4J c2 = base_jets.derivative_jets(2);
  Jet g = mink_dot(c2, c2);
  if (!(g.value() > 0.0))
    throw_error(ErrorCode::quadrature,
                "pseudo-arc integrand is not positive at t = " + format_real(t));
  Jet dphi = pow(g, 0.25);
  std::vector<double> phi_coeffs(static_cast<std::size_t>(m) + 1);
  phi_coeffs[0] = s_bar;
  for (int k = 0; k < m; ++k)
    phi_coeffs[static_cast<std::size_t>(k) + 1] = dphi.coeff(k) / (k + 1);
  Jet phi = Jet::from_coefficients(t, std::move(phi_coeffs));
  Jet psi = invert_series(phi);

  CurveJet out;
  out.s = s_bar;
  for (int i = 0; i < 4; ++i) {
    Jet composed =
        compose(base_jets.components[static_cast<std::size_t>(i)].truncated(m), psi);
    out.components[static_cast<std::size_t>(i)] =
        composed.order() > order ? composed.truncated(order) : composed;
  }
  return out;
}

}  // namespace nbc
