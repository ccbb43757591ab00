#include "nbc/bertrand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "nbc/util.hpp"

namespace nbc {

namespace {

std::vector<CartanFrame> frames_on_grid(const Curve& curve,
                                        std::span<const double> grid,
                                        const Settings& settings) {
  if (grid.empty())
    throw_error(ErrorCode::invalid_argument, "grid must contain at least one point");
  std::vector<CartanFrame> frames;
  frames.reserve(grid.size());
  for (double s : grid) frames.push_back(frame_at(curve, s, settings));
  return frames;
}

double mean_of(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

// Classification core shared by check_condition and construct_mate.
BertrandCondition classify(double alpha, double beta,
                           const std::vector<CartanFrame>& frames,
                           const Settings& settings) {
  BertrandCondition cond;
  cond.alpha = alpha;
  cond.beta = beta;

  std::vector<double> ell0s;
  ell0s.reserve(frames.size());
  if (alpha == 0.0) {
    cond.condition_residual = 0.0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const CartanFrame& f : frames)
      min_margin = std::min(min_margin, 1.0 - beta * f.k2);
    cond.case1_margin = min_margin;
    // beta = 0 would make the offset coincide with the base; not a mate.
    if (beta != 0.0 && min_margin > settings.tol_condition) {
      cond.which = BertrandCase::case_one;
      for (const CartanFrame& f : frames)
        ell0s.push_back(std::sqrt(1.0 - beta * f.k2));
    }
  } else {
    double worst = 0.0;
    for (const CartanFrame& f : frames)
      worst = std::max(worst, std::abs(alpha * f.k1 + beta * f.k2 - 1.0));
    cond.condition_residual = worst;
    if (worst < settings.tol_condition) {
      cond.which = BertrandCase::case_two;
      for (const CartanFrame& f : frames)
        ell0s.push_back(std::pow(alpha * alpha * (f.k1 * f.k1 + f.k2 * f.k2), 0.25));
    }
  }

  if (cond.which != BertrandCase::none) {
    cond.ell0 = mean_of(ell0s);
    double worst = 0.0;
    for (double v : ell0s) worst = std::max(worst, std::abs(v - cond.ell0));
    cond.ell0_residual = worst / std::max(std::abs(cond.ell0), 1e-300);
    cond.cartan_mate_feasible =
        cond.ell0 > 0.0 && cond.ell0_residual < settings.tol_ell0;
  }
  return cond;
}

}  // namespace

const char* bertrand_case_name(BertrandCase which) {
  switch (which) {
    case BertrandCase::case_one: return "I";
    case BertrandCase::case_two: return "II";
    case BertrandCase::none: break;
  }
  return "none";
}

BertrandCondition check_condition(const Curve& curve, double alpha, double beta,
                                  std::span<const double> grid,
                                  const Settings& settings) {
  settings.validate();
  return classify(alpha, beta, frames_on_grid(curve, grid, settings), settings);
}

FitResult fit_constants(const Curve& curve, std::span<const double> grid,
                        const Settings& settings) {
  settings.validate();
  if (grid.size() < 2)
    throw_error(ErrorCode::invalid_argument,
                "constant fitting needs at least 2 grid points");
  std::vector<CartanFrame> frames = frames_on_grid(curve, grid, settings);

  double s11 = 0.0, s12 = 0.0, s22 = 0.0, b1 = 0.0, b2 = 0.0;
  for (const CartanFrame& f : frames) {
    s11 += f.k1 * f.k1;
    s12 += f.k1 * f.k2;
    s22 += f.k2 * f.k2;
    b1 += f.k1;
    b2 += f.k2;
  }

  FitResult fit;
  fit.n = static_cast<int>(grid.size());
  double det = s11 * s22 - s12 * s12;
  double scale = std::max(s11, s22);
  if (det > 1e-12 * scale * scale) {
    fit.alpha = (s22 * b1 - s12 * b2) / det;
    fit.beta = (s11 * b2 - s12 * b1) / det;
  } else {
    // Rank-1 normal system: the curvature samples lie on one ray (u1, u2).
    if (!(scale > 0.0))
      throw_error(ErrorCode::degenerate,
                  "both curvatures vanish on the grid; nothing to fit");
    double u1, u2;
    if (s11 >= s22) {
      u1 = s11;
      u2 = s12;
    } else {
      u1 = s12;
      u2 = s22;
    }
    double norm = std::hypot(u1, u2);
    u1 /= norm;
    u2 /= norm;
    double lambda = u1 * (s11 * u1 + s12 * u2) + u2 * (s12 * u1 + s22 * u2);
    double along = (u1 * b1 + u2 * b2) / lambda;
    fit.alpha = along * u1;
    fit.beta = along * u2;
    fit.underdetermined = true;
    fit.dir_alpha = -u2;
    fit.dir_beta = u1;
    if (fit.dir_alpha < 0.0 ||
        (fit.dir_alpha == 0.0 && fit.dir_beta < 0.0)) {
      fit.dir_alpha = -fit.dir_alpha;
      fit.dir_beta = -fit.dir_beta;
    }
  }

  for (const CartanFrame& f : frames)
    fit.residual =
        std::max(fit.residual, std::abs(fit.alpha * f.k1 + fit.beta * f.k2 - 1.0));
  if (fit.residual > settings.tol_condition)
    throw_error(ErrorCode::no_solution,
                "no constants satisfy alpha*k1 + beta*k2 = 1 on this curve "
                "(best-fit residual " +
                    format_real(fit.residual) + ")");
  return fit;
}

Obstruction classical_bertrand_obstruction(const Curve& curve,
                                           std::span<const double> grid,
                                           const Settings& settings) {
  settings.validate();
  std::vector<CartanFrame> frames = frames_on_grid(curve, grid, settings);

  double max_abs_k2 = 0.0;
  std::vector<double> k1s;
  k1s.reserve(frames.size());
  for (const CartanFrame& f : frames) {
    max_abs_k2 = std::max(max_abs_k2, std::abs(f.k2));
    k1s.push_back(f.k1);
  }
  if (max_abs_k2 < settings.tol_condition)
    throw_error(ErrorCode::degenerate,
                "k2 vanishes on the grid; the classical-mate obstruction "
                "certifies nothing here");

  Obstruction out;
  out.k1_mean = mean_of(k1s);
  for (double k1 : k1s)
    out.k1_variation = std::max(out.k1_variation, std::abs(k1 - out.k1_mean));
  out.k1_constant =
      out.k1_variation <= settings.tol_ell0 * std::max(1.0, std::abs(out.k1_mean));
  if (std::abs(out.k1_mean) <= settings.tol_condition)
    throw_error(ErrorCode::invalid_argument,
                "k1 vanishes in the mean on the grid; the forced offset 1/k1 "
                "is undefined");
  out.alpha_forced = 1.0 / out.k1_mean;
  for (const CartanFrame& f : frames)
    out.obstruction = std::max(out.obstruction, std::abs(out.alpha_forced * f.k2));
  return out;
}

double plane_coincidence_residual(const CartanFrame& base_frame,
                                  const CartanFrame& mate_frame) {
  double worst = 0.0;
  for (const Vec4* w : {&mate_frame.W1, &mate_frame.W2}) {
    Vec4 remainder = *w - mink_dot(*w, base_frame.W1) * base_frame.W1 -
                     mink_dot(*w, base_frame.W2) * base_frame.W2;
    worst = std::max(worst, remainder.euclidean_norm());
  }
  return worst;
}

MateResult construct_mate(CurvePtr base, double alpha, double beta,
                          std::span<const double> grid, const Settings& settings) {
  settings.validate();
  if (!base) throw_error(ErrorCode::invalid_argument, "mate construction needs a base");
  if (grid.size() < 2)
    throw_error(ErrorCode::invalid_argument,
                "mate verification needs at least 2 grid points");

  std::vector<CartanFrame> base_frames = frames_on_grid(*base, grid, settings);
  BertrandCondition cond = classify(alpha, beta, base_frames, settings);
  if (cond.which == BertrandCase::none) {
    if (alpha == 0.0)
      throw_error(ErrorCode::condition,
                  "offset constants (" + format_real(alpha) + ", " +
                      format_real(beta) +
                      ") satisfy neither mate condition (case-I margin " +
                      format_real(cond.case1_margin) + ")");
    throw_error(ErrorCode::condition,
                "offset constants (" + format_real(alpha) + ", " +
                    format_real(beta) +
                    ") satisfy neither mate condition (alpha*k1 + beta*k2 - 1 "
                    "residual " +
                    format_real(cond.condition_residual) + ")");
  }
  if (!cond.cartan_mate_feasible)
    throw_error(ErrorCode::condition,
                "ds_bar/ds varies over the grid (relative residual " +
                    format_real(cond.ell0_residual) +
                    "); the offset curve would not carry a Cartan frame");

  double ell0 = cond.ell0;
  CurvePtr offset = std::make_shared<OffsetCurve>(base, alpha, beta, settings);
  CurvePtr mate = std::make_shared<AffineReparamCurve>(offset, ell0,
                                                       base->name() + "_mate");

  MateResult result;
  result.mate = mate;
  MateReport& report = result.report;
  report.which = cond.which;
  report.alpha = alpha;
  report.beta = beta;
  report.ell0 = ell0;
  report.ell0_constancy_residual = cond.ell0_residual;

  double k1_sum = 0.0, abs_k2_sum = 0.0;
  for (const CartanFrame& f : base_frames) {
    k1_sum += f.k1;
    abs_k2_sum += std::abs(f.k2);
  }
  double n = static_cast<double>(grid.size());
  report.predicted_k1_bar = (k1_sum / n) / (ell0 * ell0);
  report.predicted_abs_k2_bar = (abs_k2_sum / n) / (ell0 * ell0);

  double meas_k1_sum = 0.0, meas_k2_sum = 0.0;
  report.rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CartanFrame& bf = base_frames[i];
    MateVerificationRow row;
    row.s = grid[i];
    row.s_bar = ell0 * grid[i];
    CartanFrame mf = frame_at(*mate, row.s_bar, settings);

    row.k1_bar_pred = bf.k1 / (ell0 * ell0);
    row.abs_k2_bar_pred = std::abs(bf.k2) / (ell0 * ell0);
    row.k1_bar_meas = mf.k1;
    row.k2_bar_meas = mf.k2;
    row.plane_residual = plane_coincidence_residual(bf, mf);

    Vec4 l_pred, n_pred;
    if (cond.which == BertrandCase::case_one) {
      l_pred = ell0 * bf.L;
      n_pred = (1.0 / ell0) * bf.N;
    } else {
      l_pred = (-alpha / ell0) * bf.N;
      n_pred = (-ell0 / alpha) * bf.L;
    }
    row.L_rel_residual = (mf.L - l_pred).euclidean_norm();
    row.N_rel_residual = (mf.N - n_pred).euclidean_norm();

    if (i == 0)
      report.rotation_angle =
          std::atan2(mink_dot(mf.W1, bf.W2), mink_dot(mf.W1, bf.W1));

    meas_k1_sum += mf.k1;
    meas_k2_sum += mf.k2;
    report.plane_coincidence_residual =
        std::max(report.plane_coincidence_residual, row.plane_residual);
    report.L_relation_residual =
        std::max(report.L_relation_residual, row.L_rel_residual);
    report.N_relation_residual =
        std::max(report.N_relation_residual, row.N_rel_residual);
    report.max_k1_error =
        std::max(report.max_k1_error, std::abs(row.k1_bar_meas - row.k1_bar_pred));
    report.max_abs_k2_error =
        std::max(report.max_abs_k2_error,
                 std::abs(std::abs(row.k2_bar_meas) - row.abs_k2_bar_pred));
    report.rows.push_back(row);
  }
  report.measured_k1_bar = meas_k1_sum / n;
  report.measured_k2_bar = meas_k2_sum / n;
  return result;
}

}  // namespace nbc
