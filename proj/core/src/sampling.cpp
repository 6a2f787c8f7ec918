#include "ctxbo/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "ctxbo/simplex.hpp"

namespace ctxbo {

CandidateSet sobol_points(SobolStream& stream, std::size_t m, const Bounds& bounds) {
  if (m == 0) throw InvalidArgument("sobol_points: m must be >= 1");
  if (stream.dimension() != bounds.dimension()) {
    throw DimensionError("sobol_points: stream and bounds dimension differ");
  }
  const std::size_t d = bounds.dimension();
  CandidateSet set;
  set.points.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
  std::vector<double> u(d);
  for (std::size_t i = 0; i < m; ++i) {
    stream.next_into(u.data());
    set.points.row(static_cast<Eigen::Index>(i)) = bounds.from_unit(u).transpose();
  }
  return set;
}

double mean_posterior_variance(const GpPosterior& model, const CandidateSet& probes) {
  if (probes.size() == 0) throw InvalidArgument("mean_posterior_variance: no probes");
  return model.predict_standardized(probes.points).variance.mean();
}

namespace {

double incumbent_of(const GpPosterior& model) { return model.standardized_targets().maxCoeff(); }

AcquisitionResult maximize_impl(const GpPosterior& model, const AcquisitionSpec& spec,
                                const Bounds& bounds, const CandidateSet& candidates,
                                const SearchBudget& budget, std::optional<double> supplied_mpv) {
  if (candidates.size() == 0) throw InvalidArgument("maximize_acquisition: empty candidate set");
  if (static_cast<std::size_t>(candidates.points.cols()) != bounds.dimension()) {
    throw DimensionError("maximize_acquisition: candidate dimension mismatch");
  }
  spec.validate();

  const Prediction pred = model.predict_standardized(candidates.points);
  const double mpv = supplied_mpv.value_or(pred.variance.mean());
  const double incumbent = incumbent_of(model);

  const auto m = candidates.size();
  std::vector<PosteriorSummary> batch(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    batch[i] = PosteriorSummary{pred.mean(row), std::sqrt(pred.variance(row)), incumbent, mpv};
  }
  const Vector scores = score(batch, spec);

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t k = std::min(budget.refine_starts, m);
  // Ties resolve to the earlier candidate.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores(static_cast<Eigen::Index>(a)) > scores(static_cast<Eigen::Index>(b));
  });

  AcquisitionResult result;
  result.mean_posterior_variance = mpv;
  result.contextual_variance = contextual_variance(mpv, incumbent);
  result.incumbent = incumbent;
  Eigen::Index max_var_row = 0;
  pred.variance.maxCoeff(&max_var_row);
  result.max_variance_point = candidates.points.row(max_var_row).transpose();

  const auto best_row = static_cast<Eigen::Index>(order.front());
  result.point = candidates.points.row(best_row).transpose();
  result.score = scores(best_row);
  result.best_candidate_score = result.score;

  if (k == 0) return result;

  const auto d = static_cast<Eigen::Index>(bounds.dimension());
  Vector lower(d), upper(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    lower(i) = bounds[static_cast<std::size_t>(i)].lower;
    upper(i) = bounds[static_cast<std::size_t>(i)].upper;
  }
  Matrix query(1, d);
  auto negative_score = [&](const Vector& x) {
    query.row(0) = x.transpose();
    const Prediction p = model.predict_standardized(query);
    const PosteriorSummary s{p.mean(0), std::sqrt(p.variance(0)), incumbent, mpv};
    return -score(std::span<const PosteriorSummary>(&s, 1), spec)(0);
  };

  SimplexOptions options;
  options.max_evaluations = budget.refine_evaluations_per_dimension * static_cast<int>(d);
  options.initial_step = 0.02;
  options.value_tolerance = 1e-12;
  options.point_tolerance = 1e-9;

  for (std::size_t j = 0; j < k; ++j) {
    const Vector start = candidates.points.row(static_cast<Eigen::Index>(order[j])).transpose();
    const SimplexResult r = minimize_simplex(negative_score, start, lower, upper, options);
    const double refined = -r.value;
    if (refined > result.score) {
      result.score = refined;
      result.point = r.x;
      bounds.clip(result.point);
    }
  }
  return result;
}

}  // namespace

AcquisitionResult maximize_acquisition(const GpPosterior& model, const AcquisitionSpec& spec,
                                       const Bounds& bounds, const CandidateSet& candidates,
                                       const SearchBudget& budget) {
  return maximize_impl(model, spec, bounds, candidates, budget, std::nullopt);
}

AcquisitionResult maximize_acquisition(const GpPosterior& model, const AcquisitionSpec& spec,
                                       const Bounds& bounds, const CandidateSet& candidates,
                                       const SearchBudget& budget,
                                       double mean_posterior_variance) {
  if (!(mean_posterior_variance >= 0.0)) {
    throw InvalidArgument("maximize_acquisition: mean posterior variance must be >= 0");
  }
  return maximize_impl(model, spec, bounds, candidates, budget, mean_posterior_variance);
}

AcquisitionResult maximize_acquisition(const GpPosterior& model, const AcquisitionSpec& spec,
                                       const Bounds& bounds, SobolStream& stream,
                                       const SearchBudget& budget) {
  const CandidateSet candidates = sobol_points(stream, budget.candidates, bounds);
  return maximize_acquisition(model, spec, bounds, candidates, budget);
}

}  // namespace ctxbo
