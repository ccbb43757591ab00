/* C API for the null-curve geometry library.
 *
 * Conventions:
 *   - Every fallible function returns an nbc_status; NBC_OK (0) means success.
 *   - On failure, nbc_last_error() returns a thread-local diagnostic message
 *     describing the most recent failure on the calling thread.
 *   - Objects returned through nbc_curve** are owned by the caller and must
 *     be released with nbc_curve_free(); strings returned through char** must
 *     be released with nbc_string_free().
 *   - A NULL nbc_options* selects the built-in defaults (see nbc_options).
 *   - The ambient space is Minkowski 4-space with signature (-,+,+,+); the
 *     first vector component is the timelike one.
 */
#ifndef NBC_H
#define NBC_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nbc_status {
  NBC_OK = 0,
  NBC_ERR_INVALID_ARGUMENT = 1,
  NBC_ERR_LEX = 2,            /* character outside the expression grammar */
  NBC_ERR_PARSE = 3,          /* malformed expression or curve spec */
  NBC_ERR_IO = 4,             /* file not readable/writable */
  NBC_ERR_DOMAIN = 5,         /* math domain error (sqrt/ln/division) */
  NBC_ERR_OUT_OF_DOMAIN = 6,  /* parameter outside the curve's interval */
  NBC_ERR_PSEUDO_ARC = 7,     /* curve not pseudo-arc parametrized */
  NBC_ERR_DEGENERATE = 8,     /* k2 = 0: derivatives do not span 4 dims */
  NBC_ERR_CONDITION = 9,      /* mate condition fails for these constants */
  NBC_ERR_NO_SOLUTION = 10,   /* no constants fit alpha*k1 + beta*k2 = 1 */
  NBC_ERR_RANGE = 11,         /* arc length beyond the remaining domain */
  NBC_ERR_QUADRATURE = 12,    /* integrand invalid or tolerance unreachable */
  NBC_ERR_INVALID_PARAMS = 13 /* corpus parameter constraints violated */
} nbc_status;

/* Stable lowercase-hyphen name of a status code, e.g. "pseudo-arc-violation". */
const char* nbc_status_name(nbc_status status);

/* Thread-local message for the last failure on this thread ("" if none). */
const char* nbc_last_error(void);

/* Opaque curve handle: an immutable parametric curve (from a spec file, the
 * built-in corpus, or derived by offsetting/reparametrizing another curve). */
typedef struct nbc_curve nbc_curve;

typedef struct nbc_options {
  int jet_order;          /* Taylor order for frame work (default 10) */
  double tol_pseudo_arc;  /* max |<c',c'>|, |<c'',c''>-1| accepted (1e-8) */
  double tol_gram;        /* Gram-matrix residual gate (1e-8) */
  double tol_frenet;      /* frame-derivative residual gate (1e-8) */
  double tol_condition;   /* mate-condition residual gate (1e-8) */
  double tol_degenerate;  /* ||v|| below which k2 counts as 0 (1e-10) */
  double tol_ell0;        /* relative constancy gate for ds_bar/ds (1e-8) */
  double tol_mate;        /* predicted-vs-measured mate gate (1e-6) */
  double quadrature_tol;  /* absolute quadrature tolerance (1e-10) */
} nbc_options;

/* Fills every field with the library defaults listed above. */
void nbc_options_init(nbc_options* options);

/* --- curve lifecycle ----------------------------------------------------- */

/* Loads a curve spec file: a JSON object with fields
 *   name (string), constants (object of numbers, optional),
 *   components (array of 4 expression strings in the variable s),
 *   parametrization ("pseudo_arc" | "general"), domain ([lo, hi]).     */
nbc_status nbc_curve_from_file(const char* path, nbc_curve** out);

/* Same schema, parsed from an in-memory string. */
nbc_status nbc_curve_from_json(const char* text, nbc_curve** out);

void nbc_curve_free(nbc_curve* curve);

/* Borrowed pointer, valid while the curve lives. */
const char* nbc_curve_name(const nbc_curve* curve);

void nbc_curve_domain(const nbc_curve* curve, double* lo, double* hi);

/* 1 if the curve was declared (or constructed) pseudo-arc parametrized. */
int nbc_curve_is_pseudo_arc(const nbc_curve* curve);

/* Serializes a spec-backed curve to its JSON file format.  Derived curves
 * (offsets, reparametrizations) have no spec and yield NBC_ERR_INVALID_ARGUMENT. */
nbc_status nbc_curve_to_json(const nbc_curve* curve, char** out);

void nbc_string_free(char* text);

/* --- evaluation and pseudo-arc machinery --------------------------------- */

/* k-th derivative vector (k = 0 for position) at parameter s. */
nbc_status nbc_curve_eval(const nbc_curve* curve, const nbc_options* options,
                          double s, int k, double out[4]);

/* null_res = |<c',c'>|, unit_res = |<c'',c''> - 1| at s. */
nbc_status nbc_pseudo_arc_residual(const nbc_curve* curve, double s,
                                   double* null_res, double* unit_res);

/* Worst residuals over an evenly spaced grid of `samples` points spanning the
 * full domain, plus the smallest <c'',c''> encountered (near zero means no
 * frame exists under any parametrization). */
nbc_status nbc_validate(const nbc_curve* curve, const nbc_options* options,
                        int samples, double* worst_null, double* worst_unit,
                        double* min_accel_norm2);

/* Integral of <c'',c''>^(1/4) over [t0, t1] (adaptive, abs_tol <= 0 -> default). */
nbc_status nbc_pseudo_arc_length(const nbc_curve* curve, double t0, double t1,
                                 double abs_tol, double* out);

/* Inverse of the above: the t >= t0 at which the accumulated length is sigma. */
nbc_status nbc_invert_arc(const nbc_curve* curve, double t0, double sigma,
                          double abs_tol, double* out);

/* c(s) + alpha*W1(s) + beta*W2(s), evaluated at full jet accuracy. */
nbc_status nbc_offset_curve(const nbc_curve* curve, double alpha, double beta,
                            const nbc_options* options, nbc_curve** out);

/* Reparametrizes a general-parametrized null curve by pseudo-arc; the result
 * lives on [0, total length]. */
nbc_status nbc_reparametrize_pseudo_arc(const nbc_curve* curve,
                                        const nbc_options* options,
                                        nbc_curve** out);

/* --- frames --------------------------------------------------------------- */

typedef struct nbc_frame {
  double s;
  double L[4];
  double N[4];
  double W1[4];
  double W2[4];
  double k1;
  double k2; /* always <= 0 by normalization */
  double k1_prime;
  double orientation_det; /* det(L, N, W1, W2), recorded but not enforced */
  double gram_residual;
  double frenet_residual;
} nbc_frame;

/* Frame and curvatures at s; fails with NBC_ERR_PSEUDO_ARC if the curve is
 * not pseudo-arc parametrized at s, NBC_ERR_DEGENERATE if k2 = 0. */
nbc_status nbc_frame_at(const nbc_curve* curve, const nbc_options* options,
                        double s, nbc_frame* out);

/* Worst deviation from the frame-derivative system at s; skips the
 * pseudo-arc gate so badly parametrized curves can be quantified. */
nbc_status nbc_frenet_residual(const nbc_curve* curve,
                               const nbc_options* options, double s,
                               double* out);

/* --- mate classification and construction --------------------------------- */

typedef struct nbc_condition {
  int which; /* 0 = none, 1 = case I, 2 = case II */
  double alpha;
  double beta;
  double condition_residual;
  double case1_margin;
  double ell0;
  double ell0_residual;
  int cartan_mate_feasible;
} nbc_condition;

nbc_status nbc_check_condition(const nbc_curve* curve,
                               const nbc_options* options, double alpha,
                               double beta, const double* grid, int n,
                               nbc_condition* out);

typedef struct nbc_fit {
  double alpha;
  double beta;
  double residual;
  int underdetermined; /* 1 when a whole line of constants fits */
  double dir_alpha;    /* unit direction of that line (0 when full rank) */
  double dir_beta;
  int n;
} nbc_fit;

nbc_status nbc_fit_constants(const nbc_curve* curve, const nbc_options* options,
                             const double* grid, int n, nbc_fit* out);

typedef struct nbc_obstruction {
  double alpha_forced; /* 1/mean(k1), the only classical offset possible */
  double obstruction;  /* max |alpha_forced * k2|; > 0 rules the mate out */
  double k1_mean;
  double k1_variation;
  int k1_constant;
} nbc_obstruction;

nbc_status nbc_classical_obstruction(const nbc_curve* curve,
                                     const nbc_options* options,
                                     const double* grid, int n,
                                     nbc_obstruction* out);

typedef struct nbc_mate_row {
  double s;
  double s_bar;
  double k1_bar_pred;
  double k1_bar_meas;
  double abs_k2_bar_pred;
  double k2_bar_meas;
  double plane_residual;
  double L_rel_residual;
  double N_rel_residual;
} nbc_mate_row;

typedef struct nbc_mate_report {
  int which;
  double alpha;
  double beta;
  double ell0;
  double ell0_constancy_residual;
  double predicted_k1_bar;
  double predicted_abs_k2_bar;
  double measured_k1_bar;
  double measured_k2_bar;
  double rotation_angle;
  double plane_coincidence_residual;
  double L_relation_residual;
  double N_relation_residual;
  double max_k1_error;
  double max_abs_k2_error;
} nbc_mate_report;

/* Builds and verifies the mate over the n-point grid (given in base-curve
 * parameters).  mate_out may be NULL if only the report is wanted; rows_out,
 * when non-NULL, must have capacity for n entries. */
nbc_status nbc_construct_mate(const nbc_curve* curve,
                              const nbc_options* options, double alpha,
                              double beta, const double* grid, int n,
                              nbc_curve** mate_out, nbc_mate_report* report_out,
                              nbc_mate_row* rows_out);

/* Worst Euclidean remainder of the mate's W1/W2 after Minkowski projection
 * onto the base frame's span{W1, W2}. */
nbc_status nbc_plane_coincidence(const nbc_frame* base_frame,
                                 const nbc_frame* mate_frame, double* out);

/* --- built-in corpus ------------------------------------------------------- */

nbc_status nbc_corpus_example(double a, double b, nbc_curve** out);

nbc_status nbc_corpus_scaled_example(double a, double b, double lam,
                                     nbc_curve** out);

nbc_status nbc_corpus_closed_form_frame(double a, double b, double s,
                                        nbc_frame* out);

/* which: 1 = case I, 2 = case II (case II needs b^2 > a^2).  slope_out,
 * alpha_out, beta_out may be NULL. */
nbc_status nbc_corpus_expected_mate(double a, double b, int which,
                                    nbc_curve** out, double* slope_out,
                                    double* alpha_out, double* beta_out);

int nbc_corpus_default_count(void);

nbc_status nbc_corpus_default_params(int index, double* a, double* b);

/* --- small vector helpers -------------------------------------------------- */

/* The ambient inner product: -u0*v0 + u1*v1 + u2*v2 + u3*v3. */
double nbc_mink_dot(const double u[4], const double v[4]);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NBC_H */
