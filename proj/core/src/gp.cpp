#include "ctxbo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "ctxbo/simplex.hpp"

namespace ctxbo {

namespace {

constexpr double kJitterStart = 1e-8;
constexpr double kJitterMax = 1e-2;
constexpr double kLengthscaleBoxLow = 1e-4;
constexpr double kLengthscaleBoxHigh = 1e4;
constexpr double kLogSignalLow = -10.0;
constexpr double kLogSignalHigh = 10.0;
constexpr double kLogNoiseLow = -12.0;
constexpr double kLogNoiseHigh = 2.0;
constexpr double kVanishingFraction = 1e-3;

double squared_scaled_distance(const double* a, const double* b, const Vector& lengthscales,
                               Eigen::Index a_stride, Eigen::Index b_stride) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < lengthscales.size(); ++k) {
    const double diff = (a[k * a_stride] - b[k * b_stride]) / lengthscales(k);
    sum += diff * diff;
  }
  return sum;
}

struct Standardized {
  Vector y;
  double mean = 0.0;
  double scale = 1.0;
};

Standardized standardize_targets(const Vector& targets, bool enabled) {
  Standardized out{targets, 0.0, 1.0};
  if (!enabled || targets.size() == 0) return out;
  out.mean = targets.mean();
  if (targets.size() >= 2) {
    const double var = (targets.array() - out.mean).square().mean();
    const double sd = std::sqrt(var);
    if (sd > 0.0 && std::isfinite(sd)) out.scale = sd;
  }
  out.y = (targets.array() - out.mean) / out.scale;
  return out;
}

struct Factorization {
  Matrix chol;
  double jitter = 0.0;
};

// Factor K + (noise + jitter) I, escalating jitter by 10x from 1e-8 sf2 to 1e-2 sf2.
std::optional<Factorization> factorize(const Matrix& gram, const KernelParams& params,
                                       double* last_jitter = nullptr) {
  const auto n = gram.rows();
  double jitter = kJitterStart * params.signal_variance;
  const double max_jitter = kJitterMax * params.signal_variance * (1.0 + 1e-12);
  while (jitter <= max_jitter) {
    Matrix regularized = gram;
    regularized.diagonal().array() += params.noise_variance + jitter;
    Eigen::LLT<Matrix> llt(regularized);
    if (llt.info() == Eigen::Success) {
      Matrix l = llt.matrixL();
      bool finite = l.allFinite();
      for (Eigen::Index i = 0; finite && i < n; ++i) finite = l(i, i) > 0.0;
      if (finite) return Factorization{std::move(l), jitter};
    }
    if (last_jitter != nullptr) *last_jitter = jitter;
    jitter *= 10.0;
  }
  return std::nullopt;
}

void require_dimension(const Dataset& data, const KernelParams& params) {
  if (params.dimension() != data.dimension()) {
    throw DimensionError("kernel has " + std::to_string(params.dimension()) +
                         " lengthscales but data has dimension " +
                         std::to_string(data.dimension()));
  }
}

double lml_from(const Factorization& f, const Vector& y) {
  const Vector alpha = f.chol.transpose().triangularView<Eigen::Upper>().solve(
      f.chol.triangularView<Eigen::Lower>().solve(y));
  const double n = static_cast<double>(y.size());
  return -0.5 * y.dot(alpha) - f.chol.diagonal().array().log().sum() -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

}  // namespace

void KernelParams::validate() const {
  if (lengthscales.size() == 0) throw InvalidArgument("kernel: no lengthscales");
  for (Eigen::Index i = 0; i < lengthscales.size(); ++i) {
    if (!(lengthscales(i) > 0.0) || !std::isfinite(lengthscales(i))) {
      throw InvalidArgument("kernel: lengthscale " + std::to_string(i) + " must be positive");
    }
  }
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance)) {
    throw InvalidArgument("kernel: signal variance must be positive");
  }
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw InvalidArgument("kernel: noise variance must be non-negative");
  }
}

KernelParams KernelParams::defaults_for(const Bounds& bounds) {
  KernelParams p;
  p.lengthscales.resize(static_cast<Eigen::Index>(bounds.dimension()));
  for (std::size_t i = 0; i < bounds.dimension(); ++i) {
    p.lengthscales(static_cast<Eigen::Index>(i)) = 0.25 * bounds[i].width();
  }
  p.signal_variance = 1.0;
  p.noise_variance = 1e-6;
  return p;
}

double kernel_eval(std::span<const double> a, std::span<const double> b,
                   const KernelParams& params) {
  if (a.size() != b.size() || a.size() != params.dimension()) {
    throw DimensionError("kernel_eval: dimension mismatch");
  }
  const double r2 = squared_scaled_distance(a.data(), b.data(), params.lengthscales, 1, 1);
  return params.signal_variance * std::exp(-0.5 * r2);
}

Matrix kernel_matrix(const Matrix& a, const Matrix& b, const KernelParams& params) {
  const auto d = static_cast<Eigen::Index>(params.dimension());
  if (a.cols() != d || b.cols() != d) throw DimensionError("kernel_matrix: dimension mismatch");
  Matrix k(a.rows(), b.rows());
  // Column-major storage: row i of `a` has stride a.rows().
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double r2 = squared_scaled_distance(&a(i, 0), &b(j, 0), params.lengthscales,
                                                a.rows(), b.rows());
      k(i, j) = params.signal_variance * std::exp(-0.5 * r2);
    }
  }
  return k;
}

Dataset::Dataset(Bounds bounds) : points_(0, static_cast<Eigen::Index>(bounds.dimension())),
                                  targets_(0), bounds_(std::move(bounds)) {}

Dataset::Dataset(Matrix points, Vector targets, Bounds bounds)
    : points_(std::move(points)), targets_(std::move(targets)), bounds_(std::move(bounds)) {
  if (points_.cols() != static_cast<Eigen::Index>(bounds_.dimension())) {
    throw DimensionError("dataset: point dimension does not match bounds");
  }
  if (points_.rows() != targets_.size()) {
    throw DimensionError("dataset: target count does not match point count");
  }
  for (Eigen::Index i = 0; i < points_.rows(); ++i) {
    const Vector row = points_.row(i).transpose();
    if (!bounds_.contains(as_span(row))) {
      throw InvalidArgument("dataset: point " + std::to_string(i) + " lies outside bounds");
    }
  }
}

void Dataset::append(std::span<const double> x, double y) {
  if (x.size() != bounds_.dimension()) throw DimensionError("dataset: appended point dimension");
  if (!bounds_.contains(x)) throw InvalidArgument("dataset: appended point outside bounds");
  const auto n = points_.rows();
  points_.conservativeResize(n + 1, Eigen::NoChange);
  targets_.conservativeResize(n + 1);
  for (std::size_t k = 0; k < x.size(); ++k) points_(n, static_cast<Eigen::Index>(k)) = x[k];
  targets_(n) = y;
}

GpPosterior fit_posterior(const Dataset& data, const KernelParams& params, FitOptions options) {
  require_dimension(data, params);
  params.validate();
  if (data.size() == 0) throw InvalidArgument("fit_posterior: dataset is empty");

  const Standardized s = standardize_targets(data.targets(), options.standardize);
  const Matrix gram = kernel_matrix(data.points(), data.points(), params);
  double attempted = 0.0;
  auto factor = factorize(gram, params, &attempted);
  if (!factor) {
    throw FitError("fit_posterior: Gram matrix not positive definite after jitter escalation",
                   attempted);
  }

  GpPosterior post;
  post.params_ = params;
  post.points_ = data.points();
  post.y_ = s.y;
  post.y_mean_ = s.mean;
  post.y_std_ = s.scale;
  post.jitter_ = factor->jitter;
  post.chol_ = std::move(factor->chol);
  post.alpha_ = post.chol_.transpose().triangularView<Eigen::Upper>().solve(
      post.chol_.triangularView<Eigen::Lower>().solve(post.y_));
  return post;
}

Prediction GpPosterior::predict_standardized(const Matrix& queries) const {
  if (queries.cols() != points_.cols()) throw DimensionError("predict: query dimension mismatch");
  const Matrix k_star = kernel_matrix(points_, queries, params_);  // n x m
  Prediction out;
  out.mean = k_star.transpose() * alpha_;
  const Matrix v = chol_.triangularView<Eigen::Lower>().solve(k_star);
  const double prior = params_.signal_variance + params_.noise_variance;
  out.variance = (prior - v.colwise().squaredNorm().transpose().array()).cwiseMax(0.0);
  return out;
}

Prediction GpPosterior::predict(const Matrix& queries) const {
  Prediction p = predict_standardized(queries);
  p.mean = (p.mean.array() * y_std_ + y_mean_).matrix();
  p.variance *= y_std_ * y_std_;
  return p;
}

double log_marginal_likelihood(const Dataset& data, const KernelParams& params,
                               FitOptions options) {
  require_dimension(data, params);
  params.validate();
  if (data.size() == 0) throw InvalidArgument("log_marginal_likelihood: dataset is empty");
  const Standardized s = standardize_targets(data.targets(), options.standardize);
  const Matrix gram = kernel_matrix(data.points(), data.points(), params);
  double attempted = 0.0;
  auto factor = factorize(gram, params, &attempted);
  if (!factor) {
    throw FitError("log_marginal_likelihood: Gram matrix not positive definite", attempted);
  }
  return lml_from(*factor, s.y);
}

Interval lengthscale_box(double width) {
  return {kLengthscaleBoxLow * width, kLengthscaleBoxHigh * width};
}

KernelParams optimize_hyperparameters(const Dataset& data, const KernelParams& init,
                                      const HyperparameterOptions& options) {
  require_dimension(data, init);
  init.validate();
  if (data.size() < 2) return init;

  const auto d = static_cast<Eigen::Index>(data.dimension());
  const Eigen::Index p = d + 2;
  const Standardized s = standardize_targets(data.targets(), options.fit.standardize);

  Vector lower(p), upper(p);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Interval box = lengthscale_box(data.bounds()[static_cast<std::size_t>(i)].width());
    lower(i) = std::log(box.lower);
    upper(i) = std::log(box.upper);
  }
  lower(d) = kLogSignalLow;
  upper(d) = kLogSignalHigh;
  lower(d + 1) = kLogNoiseLow;
  upper(d + 1) = kLogNoiseHigh;

  auto unpack = [&](const Vector& theta) {
    KernelParams kp;
    kp.lengthscales = theta.head(d).array().exp();
    kp.signal_variance = std::exp(theta(d));
    kp.noise_variance = std::exp(theta(d + 1));
    return kp;
  };
  auto lml_or_neg_inf = [&](const KernelParams& kp) {
    const Matrix gram = kernel_matrix(data.points(), data.points(), kp);
    auto factor = factorize(gram, kp);
    if (!factor) return -std::numeric_limits<double>::infinity();
    const double v = lml_from(*factor, s.y);
    return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
  };
  auto negative_lml = [&](const Vector& theta) { return -lml_or_neg_inf(unpack(theta)); };

  Vector start(p);
  start.head(d) = init.lengthscales.array().log();
  start(d) = std::log(init.signal_variance);
  start(d + 1) = std::log(std::max(init.noise_variance, std::exp(kLogNoiseLow)));

  SimplexOptions simplex;
  simplex.max_evaluations =
      options.evaluations_base + options.evaluations_per_parameter * static_cast<int>(p);
  simplex.value_tolerance = 1e-7;
  simplex.point_tolerance = 1e-4;
  simplex.initial_step = 0.05;

  std::mt19937_64 rng(options.seed);
  KernelParams best = init;
  double best_lml = lml_or_neg_inf(init);

  const int restarts = std::max(1, options.restarts);
  for (int r = 0; r < restarts; ++r) {
    Vector theta0 = start;
    if (r > 0) {
      for (Eigen::Index i = 0; i < d; ++i) {
        const double w = data.bounds()[static_cast<std::size_t>(i)].width();
        std::uniform_real_distribution<double> u(std::log(0.02 * w), std::log(2.0 * w));
        theta0(i) = u(rng);
      }
      theta0(d) = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
      theta0(d + 1) = std::uniform_real_distribution<double>(kLogNoiseLow, -3.0)(rng);
    }
    const SimplexResult res = minimize_simplex(negative_lml, theta0, lower, upper, simplex);
    const double lml = -res.value;
    if (lml > best_lml) {
      best_lml = lml;
      best = unpack(res.x);
    }
  }
  if (!std::isfinite(best_lml)) {
    throw FitError("optimize_hyperparameters: no restart produced a factorizable model",
                   kJitterMax * init.signal_variance);
  }
  return best;
}

ValidityReport check_kernel_validity(const KernelParams& params, const Bounds& bounds) {
  ValidityReport report;
  const std::size_t d = std::min(params.dimension(), bounds.dimension());
  for (std::size_t i = 0; i < d; ++i) {
    if (params.lengthscales(static_cast<Eigen::Index>(i)) < kVanishingFraction * bounds[i].width()) {
      report.flagged_dimensions.push_back(i);
    }
  }
  return report;
}

KernelParams reinitialize_flagged(KernelParams params, const Bounds& bounds,
                                  const ValidityReport& report) {
  for (std::size_t i : report.flagged_dimensions) {
    params.lengthscales(static_cast<Eigen::Index>(i)) = bounds[i].width();
  }
  return params;
}

}  // namespace ctxbo
