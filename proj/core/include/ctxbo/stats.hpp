#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ctxbo/types.hpp"

namespace ctxbo {

/// Arithmetic mean, accumulated as offsets from the first value so that a
/// constant sample returns that constant exactly.
[[nodiscard]] double sample_mean(std::span<const double> values);

/// Linear-interpolation percentile (p in [0,100]) of an ascending-sorted sample.
[[nodiscard]] double percentile_sorted(std::span<const double> sorted, double p);

struct ConfidenceBand {
  double low = 0.0;
  double high = 0.0;
  [[nodiscard]] double width() const { return high - low; }
};

/// Percentile bootstrap of the sample mean: draw `resamples` resamples of
/// size n with replacement, and return the requested percentiles of their
/// means. Deterministic for a given seed.
[[nodiscard]] ConfidenceBand bootstrap_ci(std::span<const double> values, std::size_t resamples,
                                          std::uint64_t seed, double low_percentile = 10.0,
                                          double high_percentile = 90.0);

/// Range-normalized ranking: |s - s_best| / (s_max - s_min). The best result
/// scores 0 and the worst 1; with fewer than two distinct results all are 0.
[[nodiscard]] std::vector<double> z_scores(std::span<const double> results, Direction better);

struct RiskArea {
  double loss = 0.0;  // fixed-margin traces worse than the adaptive one
  double gain = 0.0;  // fixed-margin traces better than the adaptive one
};

/// Sums the per-iteration disadvantage (loss) and advantage (gain) of every
/// fixed-margin trace relative to the adaptive trace.
[[nodiscard]] RiskArea risk_area(const std::vector<std::vector<double>>& fixed_traces,
                                 std::span<const double> adaptive_trace, Direction direction);

/// splitmix64 finalizer; used to derive independent seeds from one master seed.
[[nodiscard]] std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace ctxbo
