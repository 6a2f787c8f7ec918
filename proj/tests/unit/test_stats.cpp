#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "ctxbo/stats.hpp"

using namespace ctxbo;

namespace {

// Exact percentile of the bootstrap distribution of the mean of {1..5}: all
// 5^5 equally likely resamples, interpolated like the implementation.
double enumerated_percentile(double p) {
  std::vector<double> means;
  for (int a = 1; a <= 5; ++a)
    for (int b = 1; b <= 5; ++b)
      for (int c = 1; c <= 5; ++c)
        for (int d = 1; d <= 5; ++d)
          for (int e = 1; e <= 5; ++e) means.push_back((a + b + c + d + e) / 5.0);
  std::sort(means.begin(), means.end());
  const double h = (means.size() - 1) * p / 100.0;
  const auto lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  return means[lo] + frac * (means[std::min(lo + 1, means.size() - 1)] - means[lo]);
}

}  // namespace

TEST(Stats, SampleMeanOfConstantIsExact) {
  const std::vector<double> c(7, 0.1);
  EXPECT_EQ(sample_mean(c), 0.1);
  EXPECT_DOUBLE_EQ(sample_mean(std::vector<double>{1, 2, 3, 4}), 2.5);
  EXPECT_THROW((void)sample_mean(std::vector<double>{}), InvalidArgument);
}

TEST(Stats, PercentileInterpolatesLinearly) {
  const std::vector<double> s{1.0, 2.0, 4.0, 8.0};
  EXPECT_EQ(percentile_sorted(s, 0.0), 1.0);
  EXPECT_EQ(percentile_sorted(s, 100.0), 8.0);
  EXPECT_DOUBLE_EQ(percentile_sorted(s, 50.0), 3.0);
  EXPECT_DOUBLE_EQ(percentile_sorted(s, 10.0), 1.3);
  EXPECT_THROW((void)percentile_sorted(s, 101.0), InvalidArgument);
}

TEST(Bootstrap, ConstantSampleGivesDegenerateBand) {
  const std::vector<double> c(10, -1.0316);
  const ConfidenceBand b = bootstrap_ci(c, 1000, 3);
  EXPECT_EQ(b.low, -1.0316);
  EXPECT_EQ(b.high, -1.0316);
  EXPECT_EQ(b.width(), 0.0);
}

TEST(Bootstrap, SingleValueHasZeroWidth) {
  const ConfidenceBand b = bootstrap_ci(std::vector<double>{2.5}, 1000, 9);
  EXPECT_EQ(b.low, 2.5);
  EXPECT_EQ(b.high, 2.5);
}

TEST(Bootstrap, MatchesExhaustiveEnumeration) {
  const std::vector<double> v{1, 2, 3, 4, 5};
  const ConfidenceBand b = bootstrap_ci(v, 100000, 12345);
  EXPECT_NEAR(b.low, enumerated_percentile(10.0), 0.02);
  EXPECT_NEAR(b.high, enumerated_percentile(90.0), 0.02);
}

TEST(Bootstrap, TwoPointSampleSpansTheRange) {
  const ConfidenceBand b = bootstrap_ci(std::vector<double>{0.0, 1.0}, 1000, 5);
  EXPECT_EQ(b.low, 0.0);
  EXPECT_EQ(b.high, 1.0);
  EXPECT_EQ(b.width(), 1.0);
}

TEST(Bootstrap, DeterministicPerSeed) {
  const std::vector<double> v{0.3, 1.7, 2.2, 0.9, 5.1, 3.3};
  const ConfidenceBand a = bootstrap_ci(v, 500, 77);
  const ConfidenceBand b = bootstrap_ci(v, 500, 77);
  EXPECT_EQ(a.low, b.low);
  EXPECT_EQ(a.high, b.high);
  EXPECT_THROW((void)bootstrap_ci(v, 0, 1), InvalidArgument);
  EXPECT_THROW((void)bootstrap_ci(std::vector<double>{}, 10, 1), InvalidArgument);
}

TEST(ZScores, EndpointsAndDirection) {
  const std::vector<double> r{3.0, 1.0, 2.0};
  EXPECT_EQ(z_scores(r, Direction::minimize), (std::vector<double>{1.0, 0.0, 0.5}));
  EXPECT_EQ(z_scores(r, Direction::maximize), (std::vector<double>{0.0, 1.0, 0.5}));
  EXPECT_EQ(z_scores(std::vector<double>{4.0, 4.0}, Direction::minimize),
            (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(z_scores(std::vector<double>{4.0}, Direction::minimize), (std::vector<double>{0.0}));
}

TEST(ZScores, InvariantUnderPositiveAffineMaps) {
  const std::vector<double> r{0.41, 0.55, 1.2, 0.398};
  std::vector<double> t;
  for (double v : r) t.push_back(7.0 * v - 3.0);
  const auto a = z_scores(r, Direction::minimize);
  const auto b = z_scores(t, Direction::minimize);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(RiskArea, SumsDisadvantageAndAdvantage) {
  const std::vector<double> adaptive{5.0, 3.0, 1.0};
  const std::vector<std::vector<double>> fixed{{6.0, 3.0, 0.5}, {4.0, 4.0, 2.0}};
  const RiskArea min = risk_area(fixed, adaptive, Direction::minimize);
  EXPECT_DOUBLE_EQ(min.loss, 1.0 + 1.0 + 1.0);
  EXPECT_DOUBLE_EQ(min.gain, 0.5 + 1.0);
  const RiskArea max = risk_area(fixed, adaptive, Direction::maximize);
  EXPECT_DOUBLE_EQ(max.loss, min.gain);
  EXPECT_DOUBLE_EQ(max.gain, min.loss);
  EXPECT_THROW((void)risk_area({{1.0}}, adaptive, Direction::minimize), DimensionError);
}

TEST(MixSeed, MatchesSplitMix64Outputs) {
  // Successive outputs of splitmix64 seeded with 0.
  EXPECT_EQ(mix_seed(0, 0), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(mix_seed(0, 1), 0x6E789E6AA1B965F4ULL);
  EXPECT_NE(mix_seed(1, 0), mix_seed(0, 1));
}
