#include "vstar/stats.hpp"

#include <algorithm>
#include <vector>

#include "vstar/error.hpp"
#include "vstar/rng.hpp"

namespace vstar {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

BootstrapResult paired_bootstrap(std::span<const double> a, std::span<const double> b, Alternative alt,
                                 std::size_t resamples, std::uint64_t seed) {
  if (a.empty() || a.size() != b.size()) throw InvalidArgument("paired_bootstrap: need equal, non-empty samples");
  if (resamples == 0) throw InvalidArgument("paired_bootstrap: resamples must be >= 1");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];

  Rng rng(seed);
  std::size_t above = 0;  // resampled mean > 0
  std::size_t below = 0;  // resampled mean < 0
  std::size_t zero = 0;
  const auto n = diff.size();
  for (std::size_t r = 0; r < resamples; ++r) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += diff[rng.below(n)];
    if (s > 0.0) {
      ++above;
    } else if (s < 0.0) {
      ++below;
    } else {
      ++zero;
    }
  }
  const double total = static_cast<double>(resamples);
  BootstrapResult out;
  out.mean_difference = mean(diff);
  switch (alt) {
    case Alternative::LessOrEqual: out.p_value = static_cast<double>(above) / total; break;
    case Alternative::Less: out.p_value = static_cast<double>(above + zero) / total; break;
    case Alternative::TwoSided:
      out.p_value = std::min(1.0, 2.0 * static_cast<double>(std::min(above, below) + zero) / total);
      break;
  }
  return out;
}

}  // namespace vstar
