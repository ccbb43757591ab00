#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nbc/curve.hpp"
#include "nbc/minkowski.hpp"
#include "nbc/settings.hpp"

namespace nbc {

// Cartan frame of a null curve at one parameter value, with curvatures and
// quality diagnostics.  Convention: <L,N> = +1, W1 = c'', and W2 is oriented
// so that k2 = -||v|| is always negative (v = c'''' + k1'L + 2 k1 W1).
struct CartanFrame {
  double s = 0.0;
  Vec4 L, N, W1, W2;
  double k1 = 0.0;
  double k2 = 0.0;
  double k1_prime = 0.0;
  double orientation_det = 0.0;  // det of the rows (L, N, W1, W2); recorded, not enforced
  double gram_residual = 0.0;
  double frenet_residual = 0.0;
};

// Frame fields as jets, so callers can differentiate them.  Orders (relative
// to an input expansion of order m): L has m-1, W1 has m-2, N and k1 have
// m-3, W2/k2/k1' have m-4.
struct FrameJets {
  Vec4J L, N, W1, W2;
  Jet k1, k1_prime, k2;
};

// Core frame extraction from a curve expansion of order >= 4.  Performs only
// the degeneracy check (||v|| < degenerate_tol means the curve stays inside
// a 3-dimensional subspace and has no Cartan frame); parametrization checks
// are the caller's business.
FrameJets cartan_frame_jets(const CurveJet& cj, double degenerate_tol);

// Frame with diagnostics at s.  Checks that the curve is null and
// pseudo-arc parametrized at s (Error{pseudo_arc} otherwise) and that the
// frame is nondegenerate (Error{degenerate}).
CartanFrame frame_at(const Curve& curve, double s,
                     const Settings& settings = default_settings());

// Worst residual of the four frame derivative equations
//   L' = W1,  N' = k1 W1 + k2 W2,  W1' = -k1 L - N,  W2' = -k2 L
// with the primed fields obtained by differentiating the frame expansions.
// Unlike frame_at this skips the parametrization gate, so it can be used to
// QUANTIFY how badly a curve fails to be a pseudo-arc null curve.
double frenet_residual(const Curve& curve, double s,
                       const Settings& settings = default_settings());

// One table row per grid point; rows that fail (out of domain, degenerate,
// not pseudo-arc) carry the failure label instead of aborting the table.
struct CurvatureRow {
  double s = 0.0;
  std::optional<CartanFrame> frame;
  std::string error;  // empty on success
};

std::vector<CurvatureRow> curvature_table(const Curve& curve,
                                          std::span<const double> grid,
                                          const Settings& settings = default_settings());

}  // namespace nbc
