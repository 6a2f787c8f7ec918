#include "ctxbo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ctxbo {

double sample_mean(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("sample_mean: empty sample");
  const double anchor = values.front();
  double offset = 0.0;
  for (double v : values) offset += v - anchor;
  return anchor + offset / static_cast<double>(values.size());
}

double percentile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InvalidArgument("percentile: empty sample");
  if (!(p >= 0.0 && p <= 100.0)) throw InvalidArgument("percentile: p outside [0, 100]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0 || sorted[lo] == sorted[hi]) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ConfidenceBand bootstrap_ci(std::span<const double> values, std::size_t resamples,
                            std::uint64_t seed, double low_percentile, double high_percentile) {
  if (values.empty()) throw InvalidArgument("bootstrap_ci: empty sample");
  if (resamples == 0) throw InvalidArgument("bootstrap_ci: resamples must be >= 1");
  if (!(low_percentile <= high_percentile)) {
    throw InvalidArgument("bootstrap_ci: low percentile exceeds high percentile");
  }
  const std::size_t n = values.size();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  std::vector<double> means(resamples);
  std::vector<double> draw(n);
  for (std::size_t b = 0; b < resamples; ++b) {
    for (std::size_t i = 0; i < n; ++i) draw[i] = values[pick(rng)];
    // Anchor on the original sample's first value so identical inputs give identical means.
    const double anchor = values.front();
    double offset = 0.0;
    for (double v : draw) offset += v - anchor;
    means[b] = anchor + offset / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  return {percentile_sorted(means, low_percentile), percentile_sorted(means, high_percentile)};
}

std::vector<double> z_scores(std::span<const double> results, Direction better) {
  std::vector<double> z(results.size(), 0.0);
  if (results.size() < 2) return z;
  const auto [min_it, max_it] = std::minmax_element(results.begin(), results.end());
  const double range = *max_it - *min_it;
  if (!(range > 0.0)) return z;
  const double best = better == Direction::minimize ? *min_it : *max_it;
  for (std::size_t i = 0; i < results.size(); ++i) z[i] = std::abs(results[i] - best) / range;
  return z;
}

RiskArea risk_area(const std::vector<std::vector<double>>& fixed_traces,
                   std::span<const double> adaptive_trace, Direction direction) {
  RiskArea area;
  for (const auto& trace : fixed_traces) {
    if (trace.size() != adaptive_trace.size()) {
      throw DimensionError("risk_area: trace lengths differ");
    }
    for (std::size_t t = 0; t < trace.size(); ++t) {
      const double disadvantage = direction == Direction::minimize
                                      ? trace[t] - adaptive_trace[t]
                                      : adaptive_trace[t] - trace[t];
      if (disadvantage > 0.0) {
        area.loss += disadvantage;
      } else {
        area.gain -= disadvantage;
      }
    }
  }
  return area;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace ctxbo
