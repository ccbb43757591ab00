#include "nbc/minkowski.hpp"

namespace nbc {

double det4(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
  // Laplace expansion along the first row with cached 2x2 minors of the
  // bottom two rows.
  auto m2 = [&](int i, int j) { return c[i] * d[j] - c[j] * d[i]; };
  double m01 = m2(0, 1), m02 = m2(0, 2), m03 = m2(0, 3);
  double m12 = m2(1, 2), m13 = m2(1, 3), m23 = m2(2, 3);
  double det = 0.0;
  det += a[0] * (b[1] * m23 - b[2] * m13 + b[3] * m12);
  det -= a[1] * (b[0] * m23 - b[2] * m03 + b[3] * m02);
  det += a[2] * (b[0] * m13 - b[1] * m03 + b[3] * m01);
  det -= a[3] * (b[0] * m12 - b[1] * m02 + b[2] * m01);
  return det;
}

double gram_residual(const Vec4& L, const Vec4& N, const Vec4& W1,
                     const Vec4& W2) {
  const Vec4* f[4] = {&L, &N, &W1, &W2};
  // Target Gram matrix in the order (L, N, W1, W2).
  const double target[4][4] = {{0, 1, 0, 0},
                               {1, 0, 0, 0},
                               {0, 0, 1, 0},
                               {0, 0, 0, 1}};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      double dev = std::abs(mink_dot(*f[i], *f[j]) - target[i][j]);
      worst = std::max(worst, dev);
    }
  return worst;
}

}  // namespace nbc
