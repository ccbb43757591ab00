#pragma once

#include "nbc/errors.hpp"

namespace nbc {

// Numerical knobs shared by the geometry pipeline.  Defaults are chosen so
// that the shipped example curves pass every check with several digits of
// margin; they can be overridden per run (CLI flags, C API options struct).
struct Settings {
  // Truncation order used when a curve is evaluated for frame work.  A frame
  // plus its derivative consumes 5 orders, and every offset-curve layer
  // consumes 4 more of its base, so 10 leaves margin for one derived layer.
  int jet_order = 10;

  // Acceptance thresholds for |<c',c'>| and |<c'',c''> - 1| at grid samples.
  double tol_pseudo_arc = 1e-8;

  // Worst allowed deviation of the frame Gram matrix from its target.
  double tol_gram = 1e-8;

  // Worst allowed residual of the frame derivative equations.
  double tol_frenet = 1e-8;

  // Classification threshold for |alpha*k1 + beta*k2 - 1| and for the
  // least-squares fit residual.
  double tol_condition = 1e-8;

  // ||v|| below this means the curve fails to span 4 dimensions (k2 = 0) and
  // no Cartan frame exists.
  double tol_degenerate = 1e-10;

  // Relative constancy requirement on the mate's speed ds_bar/ds; if it is
  // not constant the offset curve is not pseudo-arc-affine and we refuse to
  // construct the mate.
  double tol_ell0 = 1e-8;

  // Verification threshold for mate predictions (curvatures, frame
  // relations, plane coincidence).
  double tol_mate = 1e-6;

  // Absolute tolerance of the adaptive quadrature behind pseudo-arc lengths.
  double quadrature_tol = 1e-10;

  void validate() const {
    if (jet_order < 5)
      throw_error(ErrorCode::invalid_argument, "jet order must be at least 5");
    if (tol_pseudo_arc <= 0 || tol_gram <= 0 || tol_frenet <= 0 ||
        tol_condition <= 0 || tol_degenerate <= 0 || tol_ell0 <= 0 ||
        tol_mate <= 0 || quadrature_tol <= 0)
      throw_error(ErrorCode::invalid_argument, "tolerances must be positive");
  }
};

inline const Settings& default_settings() {
  static const Settings s{};
  return s;
}

}  // namespace nbc
