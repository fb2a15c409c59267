#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "uagraph/rng.hpp"

namespace uagraph {

/// Independent trials at indices j = from, from+1, ... succeed with
/// probability rate / j. Returns the first successful index, or `limit` + 1 if
/// none succeeds up to `limit`. Uses inversion of the survival function
///   prod_{j=from}^{J} (1 - rate/j) = G(J+1-rate) G(from) / (G(from-rate) G(J+1)),
/// so the cost is logarithmic in the gap instead of linear.
inline std::uint64_t first_success(double rate, std::uint64_t from, std::uint64_t limit, Rng& rng) {
  if (rate <= 0.0) return limit + 1;
  if (static_cast<double>(from) <= rate) return from;  // probability >= 1
  const double log_u = std::log(1.0 - rng.uniform());  // in (-inf, 0]
  const double a = static_cast<double>(from);
  const double base = std::lgamma(a) - std::lgamma(a - rate);
  auto log_survival = [&](std::uint64_t j) {
    const double x = static_cast<double>(j) + 1.0;
    return std::lgamma(x - rate) - std::lgamma(x) + base;
  };
  if (log_survival(limit) >= log_u) return limit + 1;
  std::uint64_t lo = from, hi = limit;  // answer in [lo, hi]
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (log_survival(mid) < log_u) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

}  // namespace uagraph
