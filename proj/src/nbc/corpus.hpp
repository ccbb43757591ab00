#pragma once

// Built-in family of null helices with constant curvatures, used as ground
// truth throughout the test suite and exposed through the CLI:
//   c(s) = (1/sqrt(a^2+b^2)) * [ (1/a)sinh(as), (1/a)cosh(as),
//                                (1/b)sin(bs),  (1/b)cos(bs) ]
// is pseudo-arc parametrized with k1 = (b^2 - a^2)/2 and |k2| = |ab|, and has
// closed-form frames and closed-form mates for both offset cases.

#include <vector>

#include "nbc/bertrand.hpp"
#include "nbc/curve.hpp"
#include "nbc/frame.hpp"

namespace nbc {

struct ExampleParams {
  double a = 1.0;
  double b = 2.0;
};

// Throws InvalidParams unless a*b != 0 and |a| != |b| (|a| = |b| collapses
// k1 to 0 with a degenerate mate family; zeros break the 1/a, 1/b factors).
void validate_params(const ExampleParams& p);

// The family curve on domain [-2, 2], declared pseudo_arc.
CurveSpec example_curve(const ExampleParams& p);

// c(lam*s) on domain [-2/lam, 2/lam], declared general: same trace traversed
// at lam times the speed, so its pseudo-arc integrand is identically lam.
CurveSpec scaled_example(const ExampleParams& p, double lam);

// Exact frame at s, normalized to the extractor's conventions (k2 = -|ab|,
// W2 flipped accordingly when ab < 0).  frenet_residual is 0 by construction.
CartanFrame closed_form_frame(const ExampleParams& p, double s);

struct ExpectedMate {
  CurveSpec spec;   // closed-form mate, parametrized by its own pseudo-arc
  double slope = 0.0;  // ds_bar/ds of the correspondence map
  double alpha = 0.0;  // offset constants realizing this mate
  double beta = 0.0;
};

// Closed-form mates of the family:
//   case I  (alpha = 0, beta = 1/|ab|):      c_bar = 2c,    slope = sqrt(2)
//   case II (alpha = 1/(2k1), beta = -1/(2|ab|)): requires b^2 > a^2,
//            slope^2 = (a^2+b^2)/(2(b^2-a^2))
ExpectedMate expected_mate(const ExampleParams& p, BertrandCase which);

// Parameter sets shipped with the CLI corpus command: (1,2), (1,3), (2,5).
const std::vector<ExampleParams>& default_corpus();

}  // namespace nbc
