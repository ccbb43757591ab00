#include "nbc/nbc.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "nbc/bertrand.hpp"
#include "nbc/corpus.hpp"
#include "nbc/curve.hpp"
#include "nbc/errors.hpp"
#include "nbc/frame.hpp"
#include "nbc/minkowski.hpp"
#include "nbc/settings.hpp"

// The handle keeps the curve plus what the C surface cannot recover from the
// abstract interface: the spec document (when there is one) and whether the
// parametrization is pseudo-arc.
struct nbc_curve {
  nbc::CurvePtr curve;
  bool pseudo_arc = false;
  bool has_spec = false;
  nbc::CurveSpec spec;
};

namespace {

thread_local std::string t_last_error;

nbc_status map_code(nbc::ErrorCode code) {
  switch (code) {
    case nbc::ErrorCode::invalid_argument: return NBC_ERR_INVALID_ARGUMENT;
    case nbc::ErrorCode::lex: return NBC_ERR_LEX;
    case nbc::ErrorCode::parse: return NBC_ERR_PARSE;
    case nbc::ErrorCode::io: return NBC_ERR_IO;
    case nbc::ErrorCode::domain: return NBC_ERR_DOMAIN;
    case nbc::ErrorCode::out_of_domain: return NBC_ERR_OUT_OF_DOMAIN;
    case nbc::ErrorCode::pseudo_arc: return NBC_ERR_PSEUDO_ARC;
    case nbc::ErrorCode::degenerate: return NBC_ERR_DEGENERATE;
    case nbc::ErrorCode::condition: return NBC_ERR_CONDITION;
    case nbc::ErrorCode::no_solution: return NBC_ERR_NO_SOLUTION;
    case nbc::ErrorCode::range: return NBC_ERR_RANGE;
    case nbc::ErrorCode::quadrature: return NBC_ERR_QUADRATURE;
    case nbc::ErrorCode::invalid_params: return NBC_ERR_INVALID_PARAMS;
  }
  return NBC_ERR_INVALID_ARGUMENT;
}

template <typename Fn>
nbc_status wrap(Fn&& fn) {
  try {
    fn();
    t_last_error.clear();
    return NBC_OK;
  } catch (const nbc::Error& e) {
    t_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return NBC_ERR_INVALID_ARGUMENT;
  }
}

nbc_status fail_invalid(const char* message) {
  t_last_error = message;
  return NBC_ERR_INVALID_ARGUMENT;
}

nbc::Settings to_settings(const nbc_options* options) {
  if (options == nullptr) return nbc::default_settings();
  nbc::Settings s;
  s.jet_order = options->jet_order;
  s.tol_pseudo_arc = options->tol_pseudo_arc;
  s.tol_gram = options->tol_gram;
  s.tol_frenet = options->tol_frenet;
  s.tol_condition = options->tol_condition;
  s.tol_degenerate = options->tol_degenerate;
  s.tol_ell0 = options->tol_ell0;
  s.tol_mate = options->tol_mate;
  s.quadrature_tol = options->quadrature_tol;
  s.validate();
  return s;
}

nbc_curve* make_handle(nbc::CurvePtr curve, bool pseudo_arc) {
  auto* handle = new nbc_curve;
  handle->curve = std::move(curve);
  handle->pseudo_arc = pseudo_arc;
  return handle;
}

nbc_curve* make_handle(nbc::CurveSpec spec) {
  auto* handle = new nbc_curve;
  handle->has_spec = true;
  handle->pseudo_arc =
      spec.parametrization == nbc::Parametrization::pseudo_arc;
  handle->spec = spec;
  handle->curve = nbc::make_expr_curve(std::move(spec));
  return handle;
}

void fill_frame(const nbc::CartanFrame& f, nbc_frame* out) {
  out->s = f.s;
  for (int i = 0; i < 4; ++i) {
    out->L[i] = f.L[i];
    out->N[i] = f.N[i];
    out->W1[i] = f.W1[i];
    out->W2[i] = f.W2[i];
  }
  out->k1 = f.k1;
  out->k2 = f.k2;
  out->k1_prime = f.k1_prime;
  out->orientation_det = f.orientation_det;
  out->gram_residual = f.gram_residual;
  out->frenet_residual = f.frenet_residual;
}

nbc::CartanFrame read_frame(const nbc_frame* in) {
  nbc::CartanFrame f;
  f.s = in->s;
  for (int i = 0; i < 4; ++i) {
    f.L[i] = in->L[i];
    f.N[i] = in->N[i];
    f.W1[i] = in->W1[i];
    f.W2[i] = in->W2[i];
  }
  f.k1 = in->k1;
  f.k2 = in->k2;
  f.k1_prime = in->k1_prime;
  f.orientation_det = in->orientation_det;
  f.gram_residual = in->gram_residual;
  f.frenet_residual = in->frenet_residual;
  return f;
}

void fill_condition(const nbc::BertrandCondition& c, nbc_condition* out) {
  out->which = static_cast<int>(c.which);
  out->alpha = c.alpha;
  out->beta = c.beta;
  out->condition_residual = c.condition_residual;
  out->case1_margin = c.case1_margin;
  out->ell0 = c.ell0;
  out->ell0_residual = c.ell0_residual;
  out->cartan_mate_feasible = c.cartan_mate_feasible ? 1 : 0;
}

}  // namespace

const char* nbc_status_name(nbc_status status) {
  switch (status) {
    case NBC_OK: return "ok";
    case NBC_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case NBC_ERR_LEX: return "lex-error";
    case NBC_ERR_PARSE: return "parse-error";
    case NBC_ERR_IO: return "io-error";
    case NBC_ERR_DOMAIN: return "domain-error";
    case NBC_ERR_OUT_OF_DOMAIN: return "out-of-domain";
    case NBC_ERR_PSEUDO_ARC: return "pseudo-arc-violation";
    case NBC_ERR_DEGENERATE: return "degenerate-curve";
    case NBC_ERR_CONDITION: return "condition-failed";
    case NBC_ERR_NO_SOLUTION: return "no-solution";
    case NBC_ERR_RANGE: return "range-error";
    case NBC_ERR_QUADRATURE: return "quadrature-error";
    case NBC_ERR_INVALID_PARAMS: return "invalid-params";
  }
  return "unknown";
}

const char* nbc_last_error(void) { return t_last_error.c_str(); }

void nbc_options_init(nbc_options* options) {
  if (options == nullptr) return;
  const nbc::Settings& s = nbc::default_settings();
  options->jet_order = s.jet_order;
  options->tol_pseudo_arc = s.tol_pseudo_arc;
  options->tol_gram = s.tol_gram;
  options->tol_frenet = s.tol_frenet;
  options->tol_condition = s.tol_condition;
  options->tol_degenerate = s.tol_degenerate;
  options->tol_ell0 = s.tol_ell0;
  options->tol_mate = s.tol_mate;
  options->quadrature_tol = s.quadrature_tol;
}

nbc_status nbc_curve_from_file(const char* path, nbc_curve** out) {
  if (path == nullptr || out == nullptr)
    return fail_invalid("nbc_curve_from_file: path and out must be non-null");
  return wrap([&] { *out = make_handle(nbc::load_curve_spec(path)); });
}

nbc_status nbc_curve_from_json(const char* text, nbc_curve** out) {
  if (text == nullptr || out == nullptr)
    return fail_invalid("nbc_curve_from_json: text and out must be non-null");
  return wrap([&] { *out = make_handle(nbc::parse_curve_spec(text)); });
}

void nbc_curve_free(nbc_curve* curve) { delete curve; }

const char* nbc_curve_name(const nbc_curve* curve) {
  return curve == nullptr ? "" : curve->curve->name().c_str();
}

void nbc_curve_domain(const nbc_curve* curve, double* lo, double* hi) {
  if (curve == nullptr) return;
  nbc::Interval d = curve->curve->domain();
  if (lo != nullptr) *lo = d.lo;
  if (hi != nullptr) *hi = d.hi;
}

int nbc_curve_is_pseudo_arc(const nbc_curve* curve) {
  return (curve != nullptr && curve->pseudo_arc) ? 1 : 0;
}

nbc_status nbc_curve_to_json(const nbc_curve* curve, char** out) {
  if (curve == nullptr || out == nullptr)
    return fail_invalid("nbc_curve_to_json: curve and out must be non-null");
  if (!curve->has_spec)
    return fail_invalid("nbc_curve_to_json: derived curves have no spec document");
  return wrap([&] {
    std::string text = nbc::curve_spec_to_json(curve->spec);
    char* buffer = static_cast<char*>(std::malloc(text.size() + 1));
    if (buffer == nullptr) throw std::bad_alloc();
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    *out = buffer;
  });
}

void nbc_string_free(char* text) { std::free(text); }

nbc_status nbc_curve_eval(const nbc_curve* curve, const nbc_options* options,
                          double s, int k, double out[4]) {
  if (curve == nullptr || out == nullptr)
    return fail_invalid("nbc_curve_eval: curve and out must be non-null");
  if (k < 0) return fail_invalid("nbc_curve_eval: derivative order must be >= 0");
  return wrap([&] {
    nbc::Settings settings = to_settings(options);
    int order = std::max(k, std::min(settings.jet_order, 1));
    nbc::CurveJet jets = curve->curve->jets(s, order);
    nbc::Vec4 v = jets.derivative(k);
    for (int i = 0; i < 4; ++i) out[i] = v[i];
  });
}

nbc_status nbc_pseudo_arc_residual(const nbc_curve* curve, double s,
                                   double* null_res, double* unit_res) {
  if (curve == nullptr)
    return fail_invalid("nbc_pseudo_arc_residual: curve must be non-null");
  return wrap([&] {
    nbc::PseudoArcResidual r = nbc::pseudo_arc_residual(*curve->curve, s);
    if (null_res != nullptr) *null_res = r.null_residual;
    if (unit_res != nullptr) *unit_res = r.unit_residual;
  });
}

nbc_status nbc_validate(const nbc_curve* curve, const nbc_options* options,
                        int samples, double* worst_null, double* worst_unit,
                        double* min_accel_norm2) {
  if (curve == nullptr) return fail_invalid("nbc_validate: curve must be non-null");
  return wrap([&] {
    nbc::ValidationReport r =
        nbc::validate_curve(*curve->curve, samples, to_settings(options));
    if (worst_null != nullptr) *worst_null = r.worst_null;
    if (worst_unit != nullptr) *worst_unit = r.worst_unit;
    if (min_accel_norm2 != nullptr) *min_accel_norm2 = r.min_acceleration_norm2;
  });
}

nbc_status nbc_pseudo_arc_length(const nbc_curve* curve, double t0, double t1,
                                 double abs_tol, double* out) {
  if (curve == nullptr || out == nullptr)
    return fail_invalid("nbc_pseudo_arc_length: curve and out must be non-null");
  return wrap([&] {
    double tol =
        abs_tol > 0.0 ? abs_tol : nbc::default_settings().quadrature_tol;
    *out = nbc::pseudo_arc_length(*curve->curve, t0, t1, tol);
  });
}

nbc_status nbc_invert_arc(const nbc_curve* curve, double t0, double sigma,
                          double abs_tol, double* out) {
  if (curve == nullptr || out == nullptr)
    return fail_invalid("nbc_invert_arc: curve and out must be non-null");
  return wrap([&] {
    double tol =
        abs_tol > 0.0 ? abs_tol : nbc::default_settings().quadrature_tol;
    *out = nbc::invert_arc(*curve->curve, t0, sigma, tol);
  });
}

nbc_status nbc_offset_curve(const nbc_curve* curve, double alpha, double beta,
                            const nbc_options* options, nbc_curve** out) {
  if (curve == nullptr || out == nullptr)
    return fail_invalid("nbc_offset_curve: curve and out must be non-null");
  return wrap([&] {
    auto offset = std::make_shared<nbc::OffsetCurve>(curve->curve, alpha, beta,
                                                     to_settings(options));
    *out = make_handle(offset, false);
  });
}

nbc_status nbc_reparametrize_pseudo_arc(const nbc_curve* curve,
                                        const nbc_options* options,
                                        nbc_curve** out) {
  if (curve == nullptr || out == nullptr)
    return fail_invalid(
        "nbc_reparametrize_pseudo_arc: curve and out must be non-null");
  return wrap([&] {
    auto reparam = std::make_shared<nbc::PseudoArcReparamCurve>(
        curve->curve, to_settings(options));
    *out = make_handle(reparam, true);
  });
}

nbc_status nbc_frame_at(const nbc_curve* curve, const nbc_options* options,
                        double s, nbc_frame* out) {
  if (curve == nullptr || out == nullptr)
    return fail_invalid("nbc_frame_at: curve and out must be non-null");
  return wrap([&] {
    fill_frame(nbc::frame_at(*curve->curve, s, to_settings(options)), out);
  });
}

nbc_status nbc_frenet_residual(const nbc_curve* curve,
                               const nbc_options* options, double s,
                               double* out) {
  if (curve == nullptr || out == nullptr)
    return fail_invalid("nbc_frenet_residual: curve and out must be non-null");
  return wrap(
      [&] { *out = nbc::frenet_residual(*curve->curve, s, to_settings(options)); });
}

nbc_status nbc_check_condition(const nbc_curve* curve,
                               const nbc_options* options, double alpha,
                               double beta, const double* grid, int n,
                               nbc_condition* out) {
  if (curve == nullptr || grid == nullptr || out == nullptr)
    return fail_invalid(
        "nbc_check_condition: curve, grid and out must be non-null");
  if (n <= 0) return fail_invalid("nbc_check_condition: grid size must be > 0");
  return wrap([&] {
    nbc::BertrandCondition c = nbc::check_condition(
        *curve->curve, alpha, beta, {grid, static_cast<std::size_t>(n)},
        to_settings(options));
    fill_condition(c, out);
  });
}

nbc_status nbc_fit_constants(const nbc_curve* curve, const nbc_options* options,
                             const double* grid, int n, nbc_fit* out) {
  if (curve == nullptr || grid == nullptr || out == nullptr)
    return fail_invalid("nbc_fit_constants: curve, grid and out must be non-null");
  if (n <= 0) return fail_invalid("nbc_fit_constants: grid size must be > 0");
  return wrap([&] {
    nbc::FitResult fit = nbc::fit_constants(
        *curve->curve, {grid, static_cast<std::size_t>(n)}, to_settings(options));
    out->alpha = fit.alpha;
    out->beta = fit.beta;
    out->residual = fit.residual;
    out->underdetermined = fit.underdetermined ? 1 : 0;
    out->dir_alpha = fit.dir_alpha;
    out->dir_beta = fit.dir_beta;
    out->n = fit.n;
  });
}

nbc_status nbc_classical_obstruction(const nbc_curve* curve,
                                     const nbc_options* options,
                                     const double* grid, int n,
                                     nbc_obstruction* out) {
  if (curve == nullptr || grid == nullptr || out == nullptr)
    return fail_invalid(
        "nbc_classical_obstruction: curve, grid and out must be non-null");
  if (n <= 0)
    return fail_invalid("nbc_classical_obstruction: grid size must be > 0");
  return wrap([&] {
    nbc::Obstruction o = nbc::classical_bertrand_obstruction(
        *curve->curve, {grid, static_cast<std::size_t>(n)}, to_settings(options));
    out->alpha_forced = o.alpha_forced;
    out->obstruction = o.obstruction;
    out->k1_mean = o.k1_mean;
    out->k1_variation = o.k1_variation;
    out->k1_constant = o.k1_constant ? 1 : 0;
  });
}

nbc_status nbc_construct_mate(const nbc_curve* curve,
                              const nbc_options* options, double alpha,
                              double beta, const double* grid, int n,
                              nbc_curve** mate_out, nbc_mate_report* report_out,
                              nbc_mate_row* rows_out) {
  if (curve == nullptr || grid == nullptr || report_out == nullptr)
    return fail_invalid(
        "nbc_construct_mate: curve, grid and report_out must be non-null");
  if (n <= 0) return fail_invalid("nbc_construct_mate: grid size must be > 0");
  return wrap([&] {
    nbc::MateResult result = nbc::construct_mate(
        curve->curve, alpha, beta, {grid, static_cast<std::size_t>(n)},
        to_settings(options));
    const nbc::MateReport& r = result.report;
    report_out->which = static_cast<int>(r.which);
    report_out->alpha = r.alpha;
    report_out->beta = r.beta;
    report_out->ell0 = r.ell0;
    report_out->ell0_constancy_residual = r.ell0_constancy_residual;
    report_out->predicted_k1_bar = r.predicted_k1_bar;
    report_out->predicted_abs_k2_bar = r.predicted_abs_k2_bar;
    report_out->measured_k1_bar = r.measured_k1_bar;
    report_out->measured_k2_bar = r.measured_k2_bar;
    report_out->rotation_angle = r.rotation_angle;
    report_out->plane_coincidence_residual = r.plane_coincidence_residual;
    report_out->L_relation_residual = r.L_relation_residual;
    report_out->N_relation_residual = r.N_relation_residual;
    report_out->max_k1_error = r.max_k1_error;
    report_out->max_abs_k2_error = r.max_abs_k2_error;
    if (rows_out != nullptr) {
      for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const nbc::MateVerificationRow& row = r.rows[i];
        rows_out[i] = {row.s,
                       row.s_bar,
                       row.k1_bar_pred,
                       row.k1_bar_meas,
                       row.abs_k2_bar_pred,
                       row.k2_bar_meas,
                       row.plane_residual,
                       row.L_rel_residual,
                       row.N_rel_residual};
      }
    }
    if (mate_out != nullptr) *mate_out = make_handle(result.mate, true);
  });
}

nbc_status nbc_plane_coincidence(const nbc_frame* base_frame,
                                 const nbc_frame* mate_frame, double* out) {
  if (base_frame == nullptr || mate_frame == nullptr || out == nullptr)
    return fail_invalid("nbc_plane_coincidence: all arguments must be non-null");
  return wrap([&] {
    *out = nbc::plane_coincidence_residual(read_frame(base_frame),
                                           read_frame(mate_frame));
  });
}

nbc_status nbc_corpus_example(double a, double b, nbc_curve** out) {
  if (out == nullptr) return fail_invalid("nbc_corpus_example: out must be non-null");
  return wrap([&] { *out = make_handle(nbc::example_curve({a, b})); });
}

nbc_status nbc_corpus_scaled_example(double a, double b, double lam,
                                     nbc_curve** out) {
  if (out == nullptr)
    return fail_invalid("nbc_corpus_scaled_example: out must be non-null");
  return wrap([&] { *out = make_handle(nbc::scaled_example({a, b}, lam)); });
}

nbc_status nbc_corpus_closed_form_frame(double a, double b, double s,
                                        nbc_frame* out) {
  if (out == nullptr)
    return fail_invalid("nbc_corpus_closed_form_frame: out must be non-null");
  return wrap([&] { fill_frame(nbc::closed_form_frame({a, b}, s), out); });
}

nbc_status nbc_corpus_expected_mate(double a, double b, int which,
                                    nbc_curve** out, double* slope_out,
                                    double* alpha_out, double* beta_out) {
  if (out == nullptr)
    return fail_invalid("nbc_corpus_expected_mate: out must be non-null");
  if (which != 1 && which != 2)
    return fail_invalid("nbc_corpus_expected_mate: which must be 1 or 2");
  return wrap([&] {
    nbc::ExpectedMate mate = nbc::expected_mate(
        {a, b}, which == 1 ? nbc::BertrandCase::case_one
                           : nbc::BertrandCase::case_two);
    if (slope_out != nullptr) *slope_out = mate.slope;
    if (alpha_out != nullptr) *alpha_out = mate.alpha;
    if (beta_out != nullptr) *beta_out = mate.beta;
    *out = make_handle(std::move(mate.spec));
  });
}

int nbc_corpus_default_count(void) {
  return static_cast<int>(nbc::default_corpus().size());
}

nbc_status nbc_corpus_default_params(int index, double* a, double* b) {
  const auto& params = nbc::default_corpus();
  if (index < 0 || index >= static_cast<int>(params.size()))
    return fail_invalid("nbc_corpus_default_params: index out of range");
  if (a != nullptr) *a = params[static_cast<std::size_t>(index)].a;
  if (b != nullptr) *b = params[static_cast<std::size_t>(index)].b;
  t_last_error.clear();
  return NBC_OK;
}

double nbc_mink_dot(const double u[4], const double v[4]) {
  return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3];
}
