#pragma once

#include <cstdint>
#include <span>

namespace vstar {

double mean(std::span<const double> xs);

enum class Alternative {
  /// H1: mean(a) <= mean(b); p = share of resamples with mean(a - b) > 0.
  LessOrEqual,
  /// H1: mean(a) < mean(b); p = share of resamples with mean(a - b) >= 0.
  Less,
  /// p = 2 * min(share <= 0, share >= 0), capped at 1.
  TwoSided,
};

struct BootstrapResult {
  double mean_difference = 0.0;  // mean(a - b)
  double p_value = 1.0;
};

/// Paired bootstrap over per-item differences a[i] - b[i] with a fixed seed.
/// Throws InvalidArgument on empty or mismatched inputs.
BootstrapResult paired_bootstrap(std::span<const double> a, std::span<const double> b, Alternative alt,
                                 std::size_t resamples = 10000, std::uint64_t seed = 0x5eed);

}  // namespace vstar
