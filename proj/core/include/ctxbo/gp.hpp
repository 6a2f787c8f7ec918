#pragma once

// Gaussian-process regression with a squared-exponential ARD kernel.
//
// Exact inference through a Cholesky factorization of the regularized Gram
// matrix K(X,X) + (noise + jitter) I. Targets are standardized to zero mean and
// unit variance before fitting unless FitOptions::standardize is false; all
// hyperparameters live in the standardized output space.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Cholesky>

#include "ctxbo/types.hpp"

namespace ctxbo {

struct KernelParams {
  Vector lengthscales;  // one per input dimension
  double signal_variance = 1.0;
  double noise_variance = 1e-6;

  /// Throws InvalidArgument unless lengthscales > 0, signal > 0, noise >= 0.
  void validate() const;
  [[nodiscard]] std::size_t dimension() const {
    return static_cast<std::size_t>(lengthscales.size());
  }

  /// Unit signal, small noise, lengthscale = 0.25 * width per dimension.
  static KernelParams defaults_for(const Bounds& bounds);
};

/// k(a,b) = sf2 * exp(-0.5 * sum_i (a_i - b_i)^2 / l_i^2)
[[nodiscard]] double kernel_eval(std::span<const double> a, std::span<const double> b,
                                 const KernelParams& params);

/// Cross-covariance K(A,B) between the rows of A and the rows of B.
[[nodiscard]] Matrix kernel_matrix(const Matrix& a, const Matrix& b, const KernelParams& params);

/// Observed inputs (one row per point) and targets, plus the search box.
class Dataset {
 public:
  Dataset(Matrix points, Vector targets, Bounds bounds);
  explicit Dataset(Bounds bounds);

  void append(std::span<const double> x, double y);

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(targets_.size()); }
  [[nodiscard]] std::size_t dimension() const { return bounds_.dimension(); }
  [[nodiscard]] const Matrix& points() const { return points_; }
  [[nodiscard]] const Vector& targets() const { return targets_; }
  [[nodiscard]] const Bounds& bounds() const { return bounds_; }

 private:
  Matrix points_;
  Vector targets_;
  Bounds bounds_;
};

struct FitOptions {
  bool standardize = true;
};

/// Cholesky failed even at the largest jitter level.
class FitError : public Error {
 public:
  FitError(const std::string& what, double jitter) : Error(what), jitter_(jitter) {}
  [[nodiscard]] double attempted_jitter() const { return jitter_; }

 private:
  double jitter_;
};

struct Prediction {
  Vector mean;
  Vector variance;
};

/// Immutable fitted posterior. Safe to query concurrently.
class GpPosterior {
 public:
  [[nodiscard]] Prediction predict(const Matrix& queries) const;
  /// Mean and variance in the standardized output space.
  [[nodiscard]] Prediction predict_standardized(const Matrix& queries) const;

  [[nodiscard]] const KernelParams& params() const { return params_; }
  [[nodiscard]] const Matrix& points() const { return points_; }
  [[nodiscard]] const Vector& standardized_targets() const { return y_; }
  /// Lower-triangular factor L with L L^T = K + (noise + jitter) I.
  [[nodiscard]] const Matrix& chol() const { return chol_; }
  [[nodiscard]] const Vector& alpha() const { return alpha_; }
  /// Absolute jitter added to the diagonal.
  [[nodiscard]] double jitter() const { return jitter_; }
  [[nodiscard]] double y_mean() const { return y_mean_; }
  [[nodiscard]] double y_std() const { return y_std_; }
  [[nodiscard]] std::size_t dimension() const { return static_cast<std::size_t>(points_.cols()); }

  [[nodiscard]] double standardize(double y) const { return (y - y_mean_) / y_std_; }
  [[nodiscard]] double destandardize(double z) const { return y_mean_ + y_std_ * z; }

 private:
  friend GpPosterior fit_posterior(const Dataset&, const KernelParams&, FitOptions);

  KernelParams params_;
  Matrix points_;
  Vector y_;
  Matrix chol_;
  Vector alpha_;
  double jitter_ = 0.0;
  double y_mean_ = 0.0;
  double y_std_ = 1.0;
};

[[nodiscard]] GpPosterior fit_posterior(const Dataset& data, const KernelParams& params,
                                        FitOptions options = {});

[[nodiscard]] double log_marginal_likelihood(const Dataset& data, const KernelParams& params,
                                             FitOptions options = {});

struct HyperparameterOptions {
  int restarts = 5;
  /// Simplex evaluation cap per restart is base + per_parameter * (d + 2).
  int evaluations_base = 120;
  int evaluations_per_parameter = 30;
  std::uint64_t seed = 0;
  FitOptions fit;
};

/// Multi-start bounded simplex search over (log l, log sf2, log sn2).
///
/// The first start is `init` itself; the remaining restarts are drawn at
/// random inside the search box. Returns `init` unchanged when fewer than two
/// observations exist. The result never has a lower LML than `init`.
[[nodiscard]] KernelParams optimize_hyperparameters(const Dataset& data, const KernelParams& init,
                                                    const HyperparameterOptions& options = {});

/// Lengthscale search box for one dimension of the given width.
[[nodiscard]] Interval lengthscale_box(double width);

struct ValidityReport {
  std::vector<std::size_t> flagged_dimensions;
  [[nodiscard]] bool valid() const { return flagged_dimensions.empty(); }
};

/// Flags every dimension whose lengthscale fell below 1e-3 of the box width.
[[nodiscard]] ValidityReport check_kernel_validity(const KernelParams& params, const Bounds& bounds);

/// Resets each flagged lengthscale to its dimension's width.
[[nodiscard]] KernelParams reinitialize_flagged(KernelParams params, const Bounds& bounds,
                                                const ValidityReport& report);

}  // namespace ctxbo
