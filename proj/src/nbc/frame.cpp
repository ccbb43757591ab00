#include "nbc/frame.hpp"

#include <cmath>

#include "nbc/util.hpp"

namespace nbc {

FrameJets cartan_frame_jets(const CurveJet& cj, double degenerate_tol) {
  if (cj.order() < 4)
    throw_error(ErrorCode::invalid_argument,
                "frame extraction needs a curve expansion of order >= 4");
  FrameJets f;
  Vec4J c1 = cj.derivative_jets(1);
  Vec4J c2 = cj.derivative_jets(2);
  Vec4J c3 = cj.derivative_jets(3);
  Vec4J c4 = cj.derivative_jets(4);

  f.L = c1;
  f.W1 = c2;
  // <c''', c'''> = 2 k1 because c''' = -k1 L - N with L, N null, <L,N> = 1.
  f.k1 = 0.5 * mink_dot(c3, c3);
  f.k1_prime = f.k1.derivative_jet();
  for (int i = 0; i < 4; ++i) f.N[i] = -c3[i] - f.k1 * c1[i];

  // v = c'''' + k1' L + 2 k1 W1 equals -k2 W2; its norm is |k2|.
  Vec4J v;
  for (int i = 0; i < 4; ++i)
    v[i] = c4[i] + f.k1_prime * c1[i] + 2.0 * (f.k1 * c2[i]);
  Jet v_norm2 = mink_dot(v, v);
  if (!(v_norm2.value() > degenerate_tol * degenerate_tol))
    throw_error(ErrorCode::degenerate,
                "curve does not span 4 dimensions (k2 = 0): ||v|| = " +
                    std::to_string(std::sqrt(std::max(0.0, v_norm2.value()))));
  Jet v_norm = sqrt(v_norm2);
  f.k2 = -v_norm;
  for (int i = 0; i < 4; ++i) f.W2[i] = v[i] / v_norm;
  return f;
}

namespace {

double frenet_residual_from(const FrameJets& f) {
  double k1 = f.k1.value();
  double k2 = f.k2.value();
  Vec4 L = value_of(f.L), N = value_of(f.N), W1 = value_of(f.W1),
       W2 = value_of(f.W2);
  Vec4 dL = derivative_value_of(f.L), dN = derivative_value_of(f.N),
       dW1 = derivative_value_of(f.W1), dW2 = derivative_value_of(f.W2);
  double r = (dL - W1).max_abs();
  r = std::max(r, (dN - (k1 * W1 + k2 * W2)).max_abs());
  r = std::max(r, (dW1 - (-(k1 * L) - N)).max_abs());
  r = std::max(r, (dW2 - (-k2 * L)).max_abs());
  return r;
}

CartanFrame frame_from_jets(double s, const FrameJets& f, bool with_frenet) {
  CartanFrame out;
  out.s = s;
  out.L = value_of(f.L);
  out.N = value_of(f.N);
  out.W1 = value_of(f.W1);
  out.W2 = value_of(f.W2);
  out.k1 = f.k1.value();
  out.k2 = f.k2.value();
  out.k1_prime = f.k1_prime.value();
  out.orientation_det = det4(out.L, out.N, out.W1, out.W2);
  out.gram_residual = gram_residual(out.L, out.N, out.W1, out.W2);
  out.frenet_residual = with_frenet ? frenet_residual_from(f) : 0.0;
  return out;
}

}  // namespace

CartanFrame frame_at(const Curve& curve, double s, const Settings& settings) {
  settings.validate();
  CurveJet cj = curve.jets(s, settings.jet_order);
  // Pointwise parametrization gate: the frame formulas assume a null curve
  // with unit spacelike acceleration.
  Vec4 c1 = cj.derivative(1);
  Vec4 c2 = cj.derivative(2);
  double null_residual = std::abs(mink_dot(c1, c1));
  double unit_residual = std::abs(mink_dot(c2, c2) - 1.0);
  if (null_residual > settings.tol_pseudo_arc ||
      unit_residual > settings.tol_pseudo_arc)
    throw_error(ErrorCode::pseudo_arc,
                "curve is not pseudo-arc parametrized at s = " + format_real(s) +
                    " (null residual " + format_real(null_residual) +
                    ", unit residual " + format_real(unit_residual) + ")");
  FrameJets f = cartan_frame_jets(cj, settings.tol_degenerate);
  return frame_from_jets(s, f, /*with_frenet=*/true);
}

double frenet_residual(const Curve& curve, double s, const Settings& settings) {
  settings.validate();
  CurveJet cj = curve.jets(s, settings.jet_order);
  FrameJets f = cartan_frame_jets(cj, settings.tol_degenerate);
  return frenet_residual_from(f);
}

std::vector<CurvatureRow> curvature_table(const Curve& curve,
                                          std::span<const double> grid,
                                          const Settings& settings) {
  std::vector<CurvatureRow> rows;
  rows.reserve(grid.size());
  for (double s : grid) {
    CurvatureRow row;
    row.s = s;
    try {
      row.frame = frame_at(curve, s, settings);
    } catch (const Error& e) {
      row.error = error_code_name(e.code());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace nbc
