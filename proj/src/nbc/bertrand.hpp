#pragma once

// Classification and construction of curve mates offset along the spacelike
// frame fields: c_bar(s) = c(s) + alpha*W1(s) + beta*W2(s), reparametrized by
// its own pseudo-arc s_bar = ell0*s.  Two admissible cases exist:
//   case I:  alpha = 0, beta*k2 != 1 and 1 - beta*k2 > 0   (ell0^2 = 1 - beta*k2)
//   case II: alpha != 0 and alpha*k1 + beta*k2 = 1          (ell0^4 = alpha^2(k1^2+k2^2))
// Also provides the classical-mate obstruction: a curve with k2 != 0 admits no
// mate sharing only the W1 line, because that would force alpha*k2 = 0.

#include <span>
#include <vector>

#include "nbc/curve.hpp"
#include "nbc/frame.hpp"
#include "nbc/settings.hpp"

namespace nbc {

enum class BertrandCase { none = 0, case_one = 1, case_two = 2 };

// "none", "I", "II" — the names used in reports and the CLI.
const char* bertrand_case_name(BertrandCase which);

struct BertrandCondition {
  BertrandCase which = BertrandCase::none;
  double alpha = 0.0;
  double beta = 0.0;
  // case II: max over grid of |alpha*k1 + beta*k2 - 1|; case I: |alpha| (= 0).
  double condition_residual = 0.0;
  // case I diagnostic: min over grid of 1 - beta*k2 (must stay > tol).
  double case1_margin = 0.0;
  // Mean of the case-specific ds_bar/ds expression and its max relative
  // deviation over the grid; the mate is Cartan-framed only if constant.
  double ell0 = 0.0;
  double ell0_residual = 0.0;
  bool cartan_mate_feasible = false;
};

BertrandCondition check_condition(const Curve& curve, double alpha, double beta,
                                  std::span<const double> grid,
                                  const Settings& settings = default_settings());

// Least-squares constants for alpha*k1(s) + beta*k2(s) = 1 over the grid.
// When (k1, k2) is constant the normal system is rank-1: every point of a
// whole line of constants fits; we return the minimum-norm representative and
// the line direction.  Throws NoSolution when even the best fit misses.
struct FitResult {
  double alpha = 0.0;
  double beta = 0.0;
  double residual = 0.0;  // max over grid of |alpha*k1 + beta*k2 - 1|
  bool underdetermined = false;
  // Unit direction of the solution line (canonical sign), zero when full rank.
  double dir_alpha = 0.0;
  double dir_beta = 0.0;
  int n = 0;
};

FitResult fit_constants(const Curve& curve, std::span<const double> grid,
                        const Settings& settings = default_settings());

// Numeric form of the classical-mate impossibility: a classical mate forces
// the offset alpha = 1/k1 and then alpha*k2 = 0; with k2 != 0 the residual
// |alpha_forced*k2| is bounded away from zero, certifying non-existence.
struct Obstruction {
  double alpha_forced = 0.0;  // 1 / mean(k1)
  double obstruction = 0.0;   // max over grid of |alpha_forced * k2|
  double k1_mean = 0.0;
  double k1_variation = 0.0;  // max |k1 - mean|
  bool k1_constant = false;   // variation small relative to the mean
};

Obstruction classical_bertrand_obstruction(
    const Curve& curve, std::span<const double> grid,
    const Settings& settings = default_settings());

// Residual of the defining plane condition: how far the mate's spacelike
// frame plane span{W1_bar, W2_bar} sticks out of the base span{W1, W2},
// measured as the worst Euclidean norm of the Minkowski-projection remainder.
double plane_coincidence_residual(const CartanFrame& base_frame,
                                  const CartanFrame& mate_frame);

struct MateVerificationRow {
  double s = 0.0;
  double s_bar = 0.0;
  double k1_bar_pred = 0.0;
  double k1_bar_meas = 0.0;
  double abs_k2_bar_pred = 0.0;
  double k2_bar_meas = 0.0;
  double plane_residual = 0.0;
  double L_rel_residual = 0.0;
  double N_rel_residual = 0.0;
};

struct MateReport {
  BertrandCase which = BertrandCase::none;
  double alpha = 0.0;
  double beta = 0.0;
  double ell0 = 0.0;  // ds_bar/ds, constant by the feasibility gate
  double ell0_constancy_residual = 0.0;
  double predicted_k1_bar = 0.0;      // mean k1 / ell0^2
  double predicted_abs_k2_bar = 0.0;  // mean |k2| / ell0^2
  double measured_k1_bar = 0.0;       // mean over grid, recomputed on the mate
  double measured_k2_bar = 0.0;
  double rotation_angle = 0.0;  // angle of W1_bar within span{W1, W2}
  double plane_coincidence_residual = 0.0;  // maxima over the grid follow
  double L_relation_residual = 0.0;
  double N_relation_residual = 0.0;
  double max_k1_error = 0.0;      // max |measured k1_bar - predicted|
  double max_abs_k2_error = 0.0;  // max ||measured k2_bar| - predicted|
  std::vector<MateVerificationRow> rows;
};

struct MateResult {
  CurvePtr mate;
  MateReport report;
};

// Builds the offset curve, gates on the condition and on ell0 constancy,
// reparametrizes by pseudo-arc (s_bar = ell0*s), and verifies the predicted
// frame relations at every grid point:
//   case I:  L_bar = ell0*L,           N_bar = N/ell0,          W1_bar = W1
//   case II: L_bar = -(alpha/ell0)*N,  N_bar = -(ell0/alpha)*L,
//            W1_bar = cos(tau)*W1 + sin(tau)*W2 with
//            cos(tau) = -alpha*k1/ell0^2, sin(tau) = -alpha*k2/ell0^2
// plus k1_bar = k1/ell0^2 and |k2_bar| = |k2|/ell0^2 in both cases.
MateResult construct_mate(CurvePtr base, double alpha, double beta,
                          std::span<const double> grid,
                          const Settings& settings = default_settings());

}  // namespace nbc
