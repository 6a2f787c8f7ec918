#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ctxbo/sampling.hpp"
#include "oracles.hpp"

using namespace ctxbo;

namespace {

Matrix training_x() {
  Matrix x(6, 1);
  x << 0.05, 0.2, 0.41, 0.55, 0.8, 0.97;
  return x;
}

Vector training_y() {
  const Matrix x = training_x();
  Vector y(6);
  for (Eigen::Index i = 0; i < 6; ++i) y(i) = std::sin(6.0 * x(i, 0)) + 0.3 * x(i, 0);
  return y;
}

GpPosterior one_dimensional_model(KernelParams& p) {
  const Bounds b({{0.0, 1.0}});
  const Matrix x = training_x();
  const Vector y = training_y();
  p.lengthscales = Vector::Constant(1, 0.15);
  p.signal_variance = 1.3;
  p.noise_variance = 1e-5;
  return fit_posterior(Dataset(x, y, b), p);
}

// EI for maximization written from the closed form with erfc.
double oracle_ei(double mu, double sigma, double best) {
  if (sigma <= 0.0) return std::max(0.0, mu - best);
  const double u = (mu - best) / sigma;
  const double cdf = 0.5 * std::erfc(-u / std::sqrt(2.0));
  const double pdf = std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI);
  return sigma * (u * cdf + pdf);
}

}  // namespace

TEST(Sampling, SobolPointsAreAffineImagesOfTheStream) {
  const Bounds b({{-5.0, 10.0}, {0.0, 15.0}});
  SobolStream a(2), raw(2);
  const CandidateSet c = sobol_points(a, 50, b);
  ASSERT_EQ(c.size(), 50u);
  for (Eigen::Index i = 0; i < 50; ++i) {
    const auto u = raw.next();
    EXPECT_DOUBLE_EQ(c.points(i, 0), -5.0 + 15.0 * u[0]);
    EXPECT_DOUBLE_EQ(c.points(i, 1), 15.0 * u[1]);
  }
  EXPECT_THROW((void)sobol_points(a, 0, b), InvalidArgument);
  SobolStream three(3);
  EXPECT_THROW((void)sobol_points(three, 4, b), DimensionError);
}

TEST(Sampling, MeanPosteriorVarianceIsTheAverageStandardizedVariance) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    const oracle::Fixture f = oracle::random_fixture(rng);
    const GpPosterior m = fit_posterior(Dataset(f.x, f.y, f.bounds), f.params);
    const oracle::DensePrediction dense =
        oracle::dense_predict(f.x, f.y, f.params, m.jitter(), f.queries);
    const double ystd = oracle::standardize(f.y).std;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < dense.variance.size(); ++i) sum += dense.variance(i) / (ystd * ystd);
    const double expected = sum / static_cast<double>(dense.variance.size());
    const double got = mean_posterior_variance(m, CandidateSet{f.queries});
    EXPECT_NEAR(got, expected, 1e-6 * (f.params.signal_variance + f.params.noise_variance));
  }
}

TEST(Sampling, MeanPosteriorVarianceFarFromDataIsPriorVariance) {
  KernelParams p;
  const GpPosterior m = one_dimensional_model(p);
  Matrix far(3, 1);
  far << 50.0, 80.0, -40.0;
  EXPECT_NEAR(mean_posterior_variance(m, CandidateSet{far}),
              p.signal_variance + p.noise_variance, 1e-12);
}

TEST(Sampling, SingleCandidateWithoutRefinementIsReturnedAsIs) {
  KernelParams p;
  const GpPosterior m = one_dimensional_model(p);
  Matrix one(1, 1);
  one << 0.3;
  SearchBudget budget;
  budget.refine_starts = 0;
  const AcquisitionResult r =
      maximize_acquisition(m, {AcquisitionKind::ei}, Bounds({{0.0, 1.0}}), CandidateSet{one}, budget);
  EXPECT_EQ(r.point(0), 0.3);
  EXPECT_EQ(r.score, r.best_candidate_score);
  EXPECT_EQ(r.max_variance_point(0), 0.3);
}

TEST(Sampling, AeiMatchesEiWhenMeanVarianceIsZero) {
  KernelParams p;
  const GpPosterior m = one_dimensional_model(p);
  const Bounds b({{0.0, 1.0}});
  SobolStream s(1);
  const CandidateSet c = sobol_points(s, 256, b);
  SearchBudget budget;
  const AcquisitionResult a = maximize_acquisition(m, {AcquisitionKind::aei}, b, c, budget, 0.0);
  const AcquisitionResult e = maximize_acquisition(m, {AcquisitionKind::ei}, b, c, budget, 0.0);
  EXPECT_EQ(a.contextual_variance, 0.0);
  EXPECT_EQ(a.point(0), e.point(0));
  EXPECT_EQ(a.score, e.score);
}

TEST(Sampling, MaximizerMatchesDenseGridOracle) {
  KernelParams p;
  const GpPosterior m = one_dimensional_model(p);
  const Bounds b({{0.0, 1.0}});

  const int n = 100000;
  Matrix grid(n, 1);
  for (int i = 0; i < n; ++i) grid(i, 0) = static_cast<double>(i) / (n - 1);
  const oracle::DensePrediction dense =
      oracle::dense_predict(training_x(), training_y(), p, m.jitter(), grid);
  const oracle::Standardized s = oracle::standardize(training_y());
  const double best = s.y.maxCoeff();
  double grid_best = -1.0, grid_x = 0.0;
  for (int i = 0; i < n; ++i) {
    const double mu = (dense.mean(i) - s.mean) / s.std;
    const double sd = std::sqrt(dense.variance(i)) / s.std;
    const double v = oracle_ei(mu, sd, best);
    if (v > grid_best) {
      grid_best = v;
      grid_x = grid(i, 0);
    }
  }

  SobolStream stream(1);
  const AcquisitionResult r = maximize_acquisition(m, {AcquisitionKind::ei}, b, stream, SearchBudget{});
  EXPECT_NEAR(r.score, grid_best, 1e-3 * std::max(1.0, grid_best));
  EXPECT_NEAR(r.point(0), grid_x, 1e-3);
}

TEST(Sampling, RefinementNeverLowersTheScoreAndStaysInBounds) {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 15; ++t) {
    const oracle::Fixture f = oracle::random_fixture(rng);
    const GpPosterior m = fit_posterior(Dataset(f.x, f.y, f.bounds), f.params);
    SobolStream s(f.bounds.dimension());
    SearchBudget budget;
    budget.candidates = 128;
    for (auto kind : {AcquisitionKind::ei, AcquisitionKind::aei, AcquisitionKind::pi}) {
      const AcquisitionResult r = maximize_acquisition(m, {kind, 0.1 * (kind != AcquisitionKind::aei)},
                                                       f.bounds, s, budget);
      EXPECT_GE(r.score, r.best_candidate_score);
      EXPECT_TRUE(f.bounds.contains(as_span(r.point)));
      EXPECT_GE(r.mean_posterior_variance, 0.0);
    }
  }
}

TEST(Sampling, RejectsMismatchedCandidates) {
  KernelParams p;
  const GpPosterior m = one_dimensional_model(p);
  Matrix two(3, 2);
  two.setZero();
  EXPECT_THROW((void)maximize_acquisition(m, {AcquisitionKind::ei}, Bounds({{0.0, 1.0}, {0.0, 1.0}}),
                                          CandidateSet{two}, SearchBudget{}, -1.0),
               InvalidArgument);
  EXPECT_THROW((void)maximize_acquisition(m, {AcquisitionKind::ei}, Bounds({{0.0, 1.0}}),
                                          CandidateSet{two}, SearchBudget{}),
               DimensionError);
}
