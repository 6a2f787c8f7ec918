#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "commands.hpp"
#include "ctxbo/acquisition.hpp"
#include "ctxbo/gp.hpp"
#include "ctxbo/objectives.hpp"
#include "ctxbo/sobol.hpp"

namespace ctxbo::cli {

namespace {

bool check(bool ok, const std::string& what) {
  std::printf("%s  %s\n", ok ? "PASS" : "FAIL", what.c_str());
  return ok;
}

// Posterior mean and variance from an explicit inverse of the Gram matrix.
bool gp_against_dense_inverse() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Bounds bounds(std::vector<Interval>(3, Interval{0.0, 1.0}));
  Matrix x(12, 3);
  Vector y(12);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) x(i, j) = u(rng);
    y(i) = std::sin(3.0 * x(i, 0)) + x(i, 1) * x(i, 2);
  }
  KernelParams params;
  params.lengthscales = Vector(3);
  params.lengthscales << 0.4, 0.6, 0.5;
  params.signal_variance = 1.3;
  params.noise_variance = 1e-4;
  const GpPosterior post = fit_posterior(Dataset(x, y, bounds), params);

  const Vector ys = post.standardized_targets();
  Matrix k = kernel_matrix(x, x, params);
  k.diagonal().array() += params.noise_variance + post.jitter();
  const Matrix k_inv = k.inverse();
  Matrix q(5, 3);
  for (Eigen::Index i = 0; i < q.rows(); ++i)
    for (Eigen::Index j = 0; j < 3; ++j) q(i, j) = u(rng);
  const Prediction p = post.predict_standardized(q);
  const Matrix ks = kernel_matrix(q, x, params);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    const double mean = ks.row(i) * k_inv * ys;
    const double var = params.signal_variance + params.noise_variance -
                       (ks.row(i) * k_inv * ks.row(i).transpose())(0, 0);
    worst = std::max(worst, std::abs(mean - p.mean(i)) / std::max(1.0, std::abs(mean)));
    worst = std::max(worst, std::abs(var - p.variance(i)) / std::max(1.0, std::abs(var)));
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "GP posterior vs explicit inverse (max rel. error %.2e)", worst);
  return check(worst <= 1e-8, buf);
}

// Closed-form EI against trapezoidal integration of max(0, y - f*) N(y; mu, sigma).
bool ei_against_quadrature() {
  const double cases[][3] = {{0.3, 0.5, 0.1}, {-1.0, 2.0, 0.5}, {1.2, 0.1, 1.0}};
  double worst = 0.0;
  for (const auto& c : cases) {
    const double mu = c[0], sigma = c[1], best = c[2];
    const PosteriorSummary s{mu, sigma, best, 0.0};
    const double closed = expected_improvement(s, AcquisitionSpec{AcquisitionKind::ei, 0.0});
    const int n = 200000;
    const double lo = best, hi = mu + 12.0 * sigma;
    double sum = 0.0;
    if (hi > lo) {
      const double h = (hi - lo) / n;
      for (int i = 0; i <= n; ++i) {
        const double y = lo + i * h;
        const double z = (y - mu) / sigma;
        const double f = (y - best) * std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
        sum += (i == 0 || i == n) ? 0.5 * f : f;
      }
      sum *= h;
    }
    worst = std::max(worst, std::abs(sum - closed));
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "expected improvement vs quadrature (max abs. error %.2e)", worst);
  return check(worst <= 1e-7, buf);
}

bool sobol_prefix() {
  SobolStream s(2);
  const double expected[][2] = {{0.5, 0.5}, {0.75, 0.25}, {0.25, 0.75}, {0.375, 0.375}};
  bool ok = true;
  for (const auto& e : expected) {
    const std::vector<double> p = s.next();
    ok = ok && p[0] == e[0] && p[1] == e[1];
  }
  return check(ok, "Sobol sequence prefix in two dimensions");
}

}  // namespace

int selftest_command() {
  bool ok = true;
  for (const auto& r : self_test_objectives()) {
    std::string loc;
    for (std::size_t i = 0; i < r.location.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "", r.location[i]);
      loc += buf;
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s(%s) = %.6f, expected %.6f +/- %g", r.objective.c_str(),
                  loc.c_str(), r.value, r.expected, r.tolerance);
    ok = check(r.passed(), buf) && ok;
  }
  ok = gp_against_dense_inverse() && ok;
  ok = ei_against_quadrature() && ok;
  ok = sobol_prefix() && ok;
  return ok ? kOk : kSelfTestFailed;
}

}  // namespace ctxbo::cli
