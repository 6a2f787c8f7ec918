#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ctxbo/objectives.hpp"

using namespace ctxbo;

namespace {

// Hartmann-6 written out from its published constants.
double hartmann6_reference(const std::vector<double>& x) {
  const double alpha[4] = {1.0, 1.2, 3.0, 3.2};
  const double a[4][6] = {{10, 3, 17, 3.5, 1.7, 8},
                          {0.05, 10, 17, 0.1, 8, 14},
                          {3, 3.5, 1.7, 10, 17, 8},
                          {17, 8, 0.05, 10, 0.1, 14}};
  const double p[4][6] = {{1312, 1696, 5569, 124, 8283, 5886},
                          {2329, 4135, 8307, 3736, 1004, 9991},
                          {2348, 1451, 3522, 2883, 3047, 6650},
                          {4047, 8828, 8732, 5743, 1091, 381}};
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    double e = 0.0;
    for (int j = 0; j < 6; ++j) e += a[i][j] * std::pow(x[j] - 1e-4 * p[i][j], 2);
    total += alpha[i] * std::exp(-e);
  }
  return total;
}

}  // namespace

TEST(Objectives, BraninReferenceValues) {
  const double t = 1.0 / (8.0 * M_PI);
  EXPECT_NEAR(branin(std::vector<double>{0.0, 0.0}), 56.0 - 10.0 * t, 1e-12);
  EXPECT_NEAR(branin(std::vector<double>{0.0, 0.0}), 55.602113, 1e-6);
  for (const auto& x : std::vector<std::vector<double>>{{-M_PI, 12.275}, {M_PI, 2.275}, {9.42478, 2.475}}) {
    EXPECT_NEAR(branin(x), 0.397887, 1e-5);
  }
  EXPECT_THROW((void)branin(std::vector<double>{1.0}), DimensionError);
}

TEST(Objectives, CamelbackReferenceValues) {
  EXPECT_EQ(camelback(std::vector<double>{0.0, 0.0}), 0.0);
  EXPECT_NEAR(camelback(std::vector<double>{1.0, 1.0}), 4.0 - 2.1 + 1.0 / 3.0 + 1.0, 1e-12);
  EXPECT_NEAR(camelback(std::vector<double>{0.0898, -0.7126}), -1.0316, 1e-4);
  EXPECT_NEAR(camelback(std::vector<double>{-0.0898, 0.7126}), -1.0316, 1e-4);
}

TEST(Objectives, HartmannMatchesPublishedConstants) {
  const std::vector<std::vector<double>> points{
      std::vector<double>(6, 0.5),
      {0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573},
      {0.1, 0.9, 0.3, 0.7, 0.2, 0.8}};
  for (const auto& x : points) EXPECT_NEAR(hartmann6(x), hartmann6_reference(x), 1e-12);
  EXPECT_NEAR(hartmann6(points[1]), 3.32237, 1e-5);
}

TEST(Objectives, BuiltinsCarryBoxesDirectionsAndOptima) {
  const Objective b = builtin_objective("branin");
  EXPECT_EQ(b.direction(), Direction::minimize);
  EXPECT_EQ(b.bounds()[0].lower, -5.0);
  EXPECT_EQ(b.bounds()[1].upper, 15.0);
  EXPECT_EQ(builtin_objective("camelback").bounds()[0].upper, 3.0);
  const Objective h = builtin_objective("hartmann6");
  EXPECT_EQ(h.direction(), Direction::maximize);
  EXPECT_EQ(h.dimension(), 6u);
  EXPECT_THROW((void)builtin_objective("rosenbrock"), InvalidArgument);
  for (const auto& r : self_test_objectives()) EXPECT_TRUE(r.passed()) << r.objective;
}

TEST(Objectives, InternalMaxNegatesMinimizationOnly) {
  const Objective b = branin_objective();
  const Objective m = as_internal_max(b);
  const std::vector<double> x{1.0, 2.0};
  EXPECT_EQ(m.direction(), Direction::maximize);
  EXPECT_TRUE(m.negated());
  EXPECT_EQ(m(x), -b(x));
  EXPECT_NEAR(m.known_optimum()->value, -0.397887, 1e-6);

  // Already maximizing, and idempotent on wrapped objectives.
  const Objective h = as_internal_max(hartmann6_objective());
  EXPECT_FALSE(h.negated());
  const Objective twice = as_internal_max(m);
  EXPECT_TRUE(twice.negated());
  EXPECT_EQ(twice(x), m(x));
}

TEST(Objectives, InternalMaxPreservesTheArgmin) {
  const Objective c = camelback_objective();
  const Objective m = as_internal_max(c);
  double best_min = 1e300, best_max = -1e300;
  std::vector<double> at_min, at_max;
  for (int i = 0; i <= 60; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const std::vector<double> x{-3.0 + 0.1 * i, -2.0 + 0.1 * j};
      if (c(x) < best_min) best_min = c(x), at_min = x;
      if (m(x) > best_max) best_max = m(x), at_max = x;
    }
  }
  EXPECT_EQ(at_min, at_max);
  EXPECT_EQ(best_max, -best_min);
}
