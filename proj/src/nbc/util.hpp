#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "nbc/errors.hpp"

namespace nbc {

// n evenly spaced samples covering [lo, hi], endpoints exact.  Every grid in
// the toolkit is built through here so runs are reproducible.
inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw_error(ErrorCode::invalid_argument, "grid needs at least 2 samples");
  if (!(lo < hi)) throw_error(ErrorCode::invalid_argument, "grid interval is empty");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        (i == n - 1) ? hi : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return out;
}

// 17 significant digits: enough to reproduce any double exactly, so emitted
// tables are byte-stable across runs.
inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace nbc
