#pragma once

#include <cstddef>

#include "ctxbo/acquisition.hpp"
#include "ctxbo/gp.hpp"
#include "ctxbo/sobol.hpp"
#include "ctxbo/types.hpp"

namespace ctxbo {

enum class CandidateSource { sobol, refined };

struct CandidateSet {
  Matrix points;  // one candidate per row, in problem units
  CandidateSource source = CandidateSource::sobol;

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
};

/// Next m points of the stream, mapped affinely onto the box.
[[nodiscard]] CandidateSet sobol_points(SobolStream& stream, std::size_t m, const Bounds& bounds);

/// Average standardized predictive variance over the probe points.
[[nodiscard]] double mean_posterior_variance(const GpPosterior& model, const CandidateSet& probes);

struct SearchBudget {
  std::size_t candidates = 2048;
  std::size_t refine_starts = 5;
  int refine_evaluations_per_dimension = 60;

  friend bool operator==(const SearchBudget&, const SearchBudget&) = default;
};

struct AcquisitionResult {
  Vector point;
  double score = 0.0;
  /// Mean posterior variance over the candidate set (standardized space).
  double mean_posterior_variance = 0.0;
  /// c_v computed from the above; reported for every rule, used only by AEI.
  double contextual_variance = 0.0;
  /// Incumbent f* in standardized space (maximization).
  double incumbent = 0.0;
  /// Candidate with the largest predictive variance.
  Vector max_variance_point;
  /// Best raw candidate score before refinement.
  double best_candidate_score = 0.0;
};

/// Scores every candidate, then refines the top-k with a bounded simplex.
///
/// The candidates double as the probe set for the mean posterior variance.
/// Scores are computed for maximization of the model's standardized targets.
[[nodiscard]] AcquisitionResult maximize_acquisition(const GpPosterior& model,
                                                     const AcquisitionSpec& spec,
                                                     const Bounds& bounds,
                                                     const CandidateSet& candidates,
                                                     const SearchBudget& budget);

/// As above, with the mean posterior variance supplied by the caller (for
/// example, measured over a separate probe set).
[[nodiscard]] AcquisitionResult maximize_acquisition(const GpPosterior& model,
                                                     const AcquisitionSpec& spec,
                                                     const Bounds& bounds,
                                                     const CandidateSet& candidates,
                                                     const SearchBudget& budget,
                                                     double mean_posterior_variance);

/// Draws budget.candidates points from `stream` and maximizes over them.
[[nodiscard]] AcquisitionResult maximize_acquisition(const GpPosterior& model,
                                                     const AcquisitionSpec& spec,
                                                     const Bounds& bounds, SobolStream& stream,
                                                     const SearchBudget& budget);

}  // namespace ctxbo
