#pragma once

// Exhaustive subset enumeration, kept independent of the sort-based reduction
// in the library so the two can be compared.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <vector>

#include "seqdist/core_stats.hpp"

namespace oracle {

/// Per-size extremes over every subset of [n] with 1 <= |B| <= n/2, computed
/// on integer numerators n * count(B) - |B| * t and divided once.
inline std::vector<seqdist::SizeDeviation> brute_force_uniform_deviations(const seqdist::EmpiricalState& s) {
  const std::size_t n = s.size();
  const auto t = static_cast<std::int64_t>(s.t());
  const auto nn = static_cast<std::int64_t>(n);
  const std::size_t half = n / 2;
  std::vector<std::int64_t> best_pos(half, std::numeric_limits<std::int64_t>::min());
  std::vector<std::int64_t> best_neg(half, std::numeric_limits<std::int64_t>::min());
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    if (k > half) continue;
    std::int64_t in = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) in += static_cast<std::int64_t>(s.count(i));
    const std::int64_t num = nn * in - static_cast<std::int64_t>(k) * t;
    best_pos[k - 1] = std::max(best_pos[k - 1], num);
    best_neg[k - 1] = std::max(best_neg[k - 1], -num);
  }
  std::vector<seqdist::SizeDeviation> out(half);
  const double denom = static_cast<double>(nn * t);
  for (std::size_t k = 0; k < half; ++k) {
    out[k] = {static_cast<double>(best_pos[k]) / denom, static_cast<double>(best_neg[k]) / denom};
  }
  return out;
}

/// Same enumeration against an arbitrary reference, in floating point.
inline std::vector<seqdist::SizeDeviation> brute_force_deviations(const seqdist::EmpiricalState& s,
                                                                  const seqdist::Distribution& ref) {
  const std::size_t n = s.size();
  const double t = static_cast<double>(s.t());
  const std::size_t half = n / 2;
  std::vector<seqdist::SizeDeviation> out(half, {-1e300, -1e300});
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    if (k > half) continue;
    double emp = 0.0;
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        emp += static_cast<double>(s.count(i)) / t;
        r += ref[i];
      }
    }
    out[k - 1].positive = std::max(out[k - 1].positive, emp - r);
    out[k - 1].negative = std::max(out[k - 1].negative, r - emp);
  }
  return out;
}

}  // namespace oracle
