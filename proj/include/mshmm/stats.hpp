#ifndef MSHMM_STATS_HPP
#define MSHMM_STATS_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "mshmm/errors.hpp"

namespace mshmm {

inline double mean_of(const std::vector<double>& x) {
  if (x.empty()) throw DimensionError("mean of empty vector");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

// Sample variance (n-1 denominator).
inline double variance_of(const std::vector<double>& x) {
  if (x.size() < 2) throw DimensionError("variance needs at least 2 values");
  const double m = mean_of(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

// Linear interpolation between order statistics (R type-7 convention) on an
// ascending-sorted vector.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw DimensionError("quantile of empty vector");
  if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("quantile level outside [0,1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double quantile_of(std::vector<double> x, double q) {
  std::sort(x.begin(), x.end());
  return quantile_sorted(x, q);
}

}  // namespace mshmm

#endif
