#pragma once

// The Bayesian-optimization loop and the repeated-study protocol built on it.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ctxbo/acquisition.hpp"
#include "ctxbo/objectives.hpp"
#include "ctxbo/sampling.hpp"
#include "ctxbo/stats.hpp"
#include "ctxbo/types.hpp"

namespace ctxbo {

struct ExperimentConfig {
  ExperimentConfig(Objective objective, AcquisitionSpec acquisition)
      : objective(std::move(objective)), acquisition(acquisition) {}

  Objective objective;
  AcquisitionSpec acquisition;
  /// Display name; empty means acquisition.label().
  std::string strategy;
  std::size_t n_init = 3;
  std::size_t budget = 50;
  std::size_t repeats = 10;
  std::uint64_t master_seed = 0;
  SearchBudget candidate_budget;
  std::size_t bootstrap_resamples = 1000;
  int hyper_restarts = 5;
  std::size_t max_consecutive_failures = 3;

  void validate() const;
  [[nodiscard]] std::string label() const;
};

struct TraceRecord {
  std::size_t iteration = 0;  // 1-based evaluation count
  std::vector<double> x;
  double y = 0.0;             // problem units
  double best_so_far = 0.0;   // problem units, direction-aware
  double contextual_variance = 0.0;
  double mean_posterior_variance = 0.0;
  bool kernel_valid = true;
};

struct Trace {
  std::string strategy;
  std::size_t repeat = 0;
  std::uint64_t seed = 0;
  Direction direction = Direction::minimize;
  std::size_t n_init = 0;
  std::vector<TraceRecord> records;
  /// Objective failures that were retried.
  std::vector<std::string> errors;

  [[nodiscard]] std::vector<double> best_so_far() const;
  [[nodiscard]] double final_best() const;
};

/// A run stopped after too many consecutive objective failures.
class AbortedRun : public Error {
 public:
  AbortedRun(const std::string& what, Trace partial) : Error(what), partial_(std::move(partial)) {}
  [[nodiscard]] const Trace& partial() const { return partial_; }

 private:
  Trace partial_;
};

/// Seed of repeat `index`; shared by every strategy in a study.
[[nodiscard]] std::uint64_t repeat_seed(std::uint64_t master_seed, std::size_t index);

/// Root of the bootstrap draws used when summarizing a study.
[[nodiscard]] std::uint64_t study_bootstrap_seed(std::uint64_t master_seed);

/// One search: n_init uniform-random points, then `budget` acquisitions.
/// Initial points depend only on run_seed, not on the acquisition rule.
[[nodiscard]] Trace run_bo(const ExperimentConfig& config, std::uint64_t run_seed,
                           std::size_t repeat = 0);

/// Bootstrap spread of the final best-so-far values across traces.
[[nodiscard]] double delta_ci(std::span<const Trace> traces, std::size_t resamples,
                              std::uint64_t seed);

struct StrategySummary {
  std::string strategy;
  std::vector<Trace> traces;  // surviving repeats, ordered by repeat index
  std::vector<std::string> warnings;
  std::vector<double> mean_trace;
  std::vector<ConfidenceBand> bands;  // 10th/90th percentile of the bootstrapped mean
  double final_mean = 0.0;
  double delta_ci = 0.0;
  /// Mean best-so-far at evaluation number `budget`, counting the seed points.
  double mean_at_budget_including_seeds = 0.0;
};

struct StudySummary {
  std::string objective;
  Direction direction = Direction::minimize;
  std::size_t n_init = 0;
  std::size_t budget = 0;
  std::vector<StrategySummary> strategies;
  std::vector<double> search_z;
  std::vector<double> delta_ci_z;
  std::vector<double> overall_z;
};

/// Aggregates equal-length traces of one strategy. Bootstrap seeds derive
/// from `bootstrap_seed` and the iteration index only.
[[nodiscard]] StrategySummary summarize_strategy(std::string strategy, std::vector<Trace> traces,
                                                 std::size_t budget, std::size_t resamples,
                                                 std::uint64_t bootstrap_seed);

/// Fills the per-experiment Z columns from the strategy summaries.
void compute_z(StudySummary& study);

struct StudyOptions {
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Minimum surviving repeats per strategy (capped at the repeat count).
  std::size_t min_survivors = 3;
};

/// Every (strategy, repeat) pair runs independently; repeat i of every
/// strategy shares seed repeat_seed(master_seed, i).
[[nodiscard]] StudySummary run_study(std::span<const ExperimentConfig> configs,
                                     const StudyOptions& options = {});

/// Mean of per-study Z scores over several studies.
struct OverallZ {
  std::vector<std::string> strategies;
  std::vector<double> search;
  std::vector<double> delta_ci;
  std::vector<double> overall;
};

[[nodiscard]] OverallZ overall_z(std::span<const StudySummary> studies);

struct SweepResult {
  StudySummary study;  // fixed-margin strategies first, AEI last
  std::vector<double> epsilons;
  std::vector<std::vector<double>> fixed_mean_traces;
  std::vector<double> adaptive_mean_trace;
  RiskArea risk;
};

/// Runs EI at every margin in the grid plus AEI, with a shared seed schedule.
[[nodiscard]] SweepResult epsilon_sweep(const ExperimentConfig& base,
                                        std::span<const double> epsilons, std::size_t repeats,
                                        const StudyOptions& options = {});

/// Margins start, start+step, ... up to and including stop.
[[nodiscard]] std::vector<double> epsilon_grid(double start, double stop, double step);

}  // namespace ctxbo
