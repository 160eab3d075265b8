#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "cc/errors.hpp"

namespace cc {

/// Least-squares slope of log(value) against log(scale).
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS residual of the fit in log space
  std::vector<std::pair<double, double>> pairs;
};

/// Requires at least 4 pairs spanning at least 3 octaves of scale, all values
/// strictly positive; clipped or zero values are rejected, not floored.
inline RateFit fit_loglog_slope(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 4) throw DegenerateDataError("fit_loglog_slope: need at least 4 pairs");
  double smin = pairs.front().first, smax = pairs.front().first;
  for (const auto& [s, v] : pairs) {
    if (s <= 0.0) throw DegenerateDataError("fit_loglog_slope: nonpositive scale");
    if (v <= 0.0) throw DegenerateDataError("fit_loglog_slope: nonpositive value");
    smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  if (smax / smin < 8.0 * (1.0 - 1e-12))
    throw DegenerateDataError("fit_loglog_slope: scales must span at least 3 octaves");

  const double n = double(pairs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [s, v] : pairs) {
    const double x = std::log(s), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  RateFit fit;
  fit.pairs = pairs;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (const auto& [s, v] : pairs) {
    const double r = std::log(v) - (fit.intercept + fit.slope * std::log(s));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace cc
