#include "ctxbo/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <random>
#include <thread>

#include "ctxbo/gp.hpp"

namespace ctxbo {

namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kHyperStream = 2;
constexpr std::uint64_t kBootstrapStream = 0xB0075;
constexpr double kDuplicateFraction = 1e-9;

std::size_t required_survivors(std::size_t repeats, std::size_t min_survivors) {
  return std::min(repeats, std::max<std::size_t>(1, min_survivors));
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_init < 1) throw InvalidArgument("experiment: n_init must be >= 1");
  if (repeats < 1) throw InvalidArgument("experiment: repeats must be >= 1");
  if (candidate_budget.candidates < 1) throw InvalidArgument("experiment: candidates must be >= 1");
  if (bootstrap_resamples < 1) throw InvalidArgument("experiment: bootstrap_resamples must be >= 1");
  if (hyper_restarts < 1) throw InvalidArgument("experiment: hyper_restarts must be >= 1");
  if (max_consecutive_failures < 1) {
    throw InvalidArgument("experiment: max_consecutive_failures must be >= 1");
  }
  acquisition.validate();
}

std::string ExperimentConfig::label() const {
  return strategy.empty() ? acquisition.label() : strategy;
}

std::vector<double> Trace::best_so_far() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.best_so_far);
  return out;
}

double Trace::final_best() const {
  if (records.empty()) throw InvalidArgument("trace: no records");
  return records.back().best_so_far;
}

std::uint64_t repeat_seed(std::uint64_t master_seed, std::size_t index) {
  return mix_seed(master_seed, index);
}

std::uint64_t study_bootstrap_seed(std::uint64_t master_seed) {
  return mix_seed(master_seed, kBootstrapStream);
}

Trace run_bo(const ExperimentConfig& config, std::uint64_t run_seed, std::size_t repeat) {
  config.validate();
  const Objective& objective = config.objective;
  const Bounds& bounds = objective.bounds();
  const std::size_t d = bounds.dimension();
  const Direction direction = objective.direction();
  const double sign = direction == Direction::minimize ? -1.0 : 1.0;

  const Objective internal = as_internal_max(objective);
  Evaluator evaluate = internal.session();

  Trace trace;
  trace.strategy = config.label();
  trace.repeat = repeat;
  trace.seed = run_seed;
  trace.direction = direction;
  trace.n_init = config.n_init;
  trace.records.reserve(config.n_init + config.budget);

  Dataset data(bounds);
  std::size_t consecutive_failures = 0;

  auto observe = [&](const Vector& x) {
    for (;;) {
      try {
        const double y = evaluate(as_span(x));
        consecutive_failures = 0;
        return y;
      } catch (const EvaluationError& e) {
        trace.errors.push_back("evaluation " + std::to_string(trace.records.size() + 1) + ": " +
                               e.what());
        if (++consecutive_failures >= config.max_consecutive_failures) {
          throw AbortedRun("run aborted after " + std::to_string(consecutive_failures) +
                               " consecutive objective failures: " + e.what(),
                           trace);
        }
      }
    }
  };

  auto record = [&](const Vector& x, double y_internal, double cv, double mpv, bool valid) {
    data.append(as_span(x), y_internal);
    TraceRecord r;
    r.iteration = trace.records.size() + 1;
    r.x.assign(x.data(), x.data() + x.size());
    r.y = sign * y_internal;
    r.best_so_far = trace.records.empty() || better(direction, r.y, trace.records.back().best_so_far)
                        ? r.y
                        : trace.records.back().best_so_far;
    r.contextual_variance = cv;
    r.mean_posterior_variance = mpv;
    r.kernel_valid = valid;
    trace.records.push_back(std::move(r));
  };

  std::mt19937_64 init_rng(mix_seed(run_seed, kInitStream));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < config.n_init; ++i) {
    std::vector<double> u(d);
    for (auto& v : u) v = unit(init_rng);
    const Vector x = bounds.from_unit(u);
    record(x, observe(x), nan, nan, true);
  }

  SobolStream stream(d);
  KernelParams params = KernelParams::defaults_for(bounds);
  HyperparameterOptions hyper;
  hyper.restarts = config.hyper_restarts;
  const std::uint64_t hyper_base = mix_seed(run_seed, kHyperStream);
  const double duplicate_radius = kDuplicateFraction * bounds.diagonal();

  for (std::size_t it = 0; it < config.budget; ++it) {
    hyper.seed = mix_seed(hyper_base, it);
    params = optimize_hyperparameters(data, params, hyper);
    const ValidityReport validity = check_kernel_validity(params, bounds);
    if (!validity.valid()) params = reinitialize_flagged(params, bounds, validity);

    const GpPosterior model = fit_posterior(data, params);
    const AcquisitionResult best =
        maximize_acquisition(model, config.acquisition, bounds, stream, config.candidate_budget);

    Vector x = best.point;
    const Matrix& seen = data.points();
    const double nearest = (seen.rowwise() - x.transpose()).rowwise().norm().minCoeff();
    if (nearest <= duplicate_radius) x = best.max_variance_point;

    record(x, observe(x), best.contextual_variance, best.mean_posterior_variance, validity.valid());
  }
  return trace;
}

double delta_ci(std::span<const Trace> traces, std::size_t resamples, std::uint64_t seed) {
  if (traces.empty()) throw InvalidArgument("delta_ci: no traces");
  const std::size_t length = traces.front().records.size();
  std::vector<double> finals;
  for (const auto& t : traces) {
    if (t.records.size() != length) throw InvalidArgument("delta_ci: traces differ in length");
    finals.push_back(t.final_best());
  }
  return bootstrap_ci(finals, resamples, seed).width();
}

StrategySummary summarize_strategy(std::string strategy, std::vector<Trace> traces,
                                   std::size_t budget, std::size_t resamples,
                                   std::uint64_t bootstrap_seed) {
  if (traces.empty()) throw InvalidArgument("summarize: strategy '" + strategy + "' has no traces");
  const std::size_t length = traces.front().records.size();
  for (const auto& t : traces) {
    if (t.records.size() != length) {
      throw InvalidArgument("summarize: traces of '" + strategy + "' differ in length");
    }
  }
  if (length == 0) throw InvalidArgument("summarize: empty traces");

  StrategySummary s;
  s.strategy = std::move(strategy);
  s.mean_trace.resize(length);
  s.bands.resize(length);
  std::vector<double> column(traces.size());
  for (std::size_t t = 0; t < length; ++t) {
    for (std::size_t r = 0; r < traces.size(); ++r) column[r] = traces[r].records[t].best_so_far;
    s.mean_trace[t] = sample_mean(column);
    s.bands[t] = bootstrap_ci(column, resamples, mix_seed(bootstrap_seed, t));
  }
  s.final_mean = s.mean_trace.back();
  s.delta_ci = s.bands.back().width();
  const std::size_t at = std::clamp<std::size_t>(budget, 1, length);
  s.mean_at_budget_including_seeds = s.mean_trace[at - 1];
  s.traces = std::move(traces);
  return s;
}

void compute_z(StudySummary& study) {
  std::vector<double> means, cis;
  for (const auto& s : study.strategies) {
    means.push_back(s.final_mean);
    cis.push_back(s.delta_ci);
  }
  study.search_z = z_scores(means, study.direction);
  study.delta_ci_z = z_scores(cis, Direction::minimize);
  study.overall_z.resize(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) {
    study.overall_z[i] = 0.5 * (study.search_z[i] + study.delta_ci_z[i]);
  }
}

StudySummary run_study(std::span<const ExperimentConfig> configs, const StudyOptions& options) {
  if (configs.empty()) throw InvalidArgument("run_study: no strategies");
  const ExperimentConfig& ref = configs.front();
  for (const auto& c : configs) {
    c.validate();
    if (c.objective.name() != ref.objective.name() || c.n_init != ref.n_init ||
        c.budget != ref.budget || c.repeats != ref.repeats || c.master_seed != ref.master_seed ||
        !(c.candidate_budget == ref.candidate_budget) ||
        c.bootstrap_resamples != ref.bootstrap_resamples ||
        c.hyper_restarts != ref.hyper_restarts) {
      throw InvalidArgument("run_study: strategies may differ only in their acquisition rule");
    }
  }
  for (std::size_t i = 0; i < configs.size(); ++i) {
    for (std::size_t j = i + 1; j < configs.size(); ++j) {
      if (configs[i].label() == configs[j].label()) {
        throw InvalidArgument("run_study: duplicate strategy '" + configs[i].label() + "'");
      }
    }
  }

  const std::size_t repeats = ref.repeats;
  const std::size_t jobs = configs.size() * repeats;
  std::vector<std::optional<Trace>> results(jobs);
  std::vector<std::string> failures(jobs);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const std::size_t s = job / repeats;
      const std::size_t r = job % repeats;
      try {
        results[job] = run_bo(configs[s], repeat_seed(ref.master_seed, r), r);
      } catch (const std::exception& e) {
        failures[job] = e.what();
      }
    }
  };
  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  StudySummary study;
  study.objective = ref.objective.name();
  study.direction = ref.objective.direction();
  study.n_init = ref.n_init;
  study.budget = ref.budget;
  const std::uint64_t boot_seed = study_bootstrap_seed(ref.master_seed);
  const std::size_t needed = required_survivors(repeats, options.min_survivors);

  for (std::size_t s = 0; s < configs.size(); ++s) {
    std::vector<Trace> traces;
    std::vector<std::string> warnings;
    for (std::size_t r = 0; r < repeats; ++r) {
      const std::size_t job = s * repeats + r;
      if (results[job]) {
        traces.push_back(std::move(*results[job]));
      } else {
        warnings.push_back("repeat " + std::to_string(r) + " dropped: " + failures[job]);
      }
    }
    if (traces.size() < needed) {
      std::string msg = "run_study: strategy '" + configs[s].label() + "' kept " +
                        std::to_string(traces.size()) + " of " + std::to_string(repeats) +
                        " repeats (need " + std::to_string(needed) + ")";
      if (!warnings.empty()) msg += "; " + warnings.front();
      throw Error(msg);
    }
    StrategySummary summary = summarize_strategy(configs[s].label(), std::move(traces),
                                                 ref.budget, ref.bootstrap_resamples, boot_seed);
    summary.warnings = std::move(warnings);
    study.strategies.push_back(std::move(summary));
  }
  compute_z(study);
  return study;
}

OverallZ overall_z(std::span<const StudySummary> studies) {
  OverallZ out;
  if (studies.empty()) return out;
  for (const auto& s : studies.front().strategies) out.strategies.push_back(s.strategy);
  const std::size_t k = out.strategies.size();
  out.search.assign(k, 0.0);
  out.delta_ci.assign(k, 0.0);
  out.overall.assign(k, 0.0);
  for (const auto& study : studies) {
    if (study.strategies.size() != k) throw InvalidArgument("overall_z: studies differ in strategies");
    for (std::size_t i = 0; i < k; ++i) {
      if (study.strategies[i].strategy != out.strategies[i]) {
        throw InvalidArgument("overall_z: strategy order differs between studies");
      }
      out.search[i] += study.search_z[i];
      out.delta_ci[i] += study.delta_ci_z[i];
    }
  }
  const double n = static_cast<double>(studies.size());
  for (std::size_t i = 0; i < k; ++i) {
    out.search[i] /= n;
    out.delta_ci[i] /= n;
    out.overall[i] = 0.5 * (out.search[i] + out.delta_ci[i]);
  }
  return out;
}

std::vector<double> epsilon_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start) || !(start >= 0.0)) {
    throw InvalidArgument("epsilon grid: need 0 <= start <= stop and step > 0");
  }
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) {
    // Round to the step's decimal resolution so labels read 0.3, not 0.30000000000000004.
    const double v = start + static_cast<double>(i) * step;
    grid.push_back(std::round(v * 1e9) / 1e9);
  }
  return grid;
}

SweepResult epsilon_sweep(const ExperimentConfig& base, std::span<const double> epsilons,
                          std::size_t repeats, const StudyOptions& options) {
  if (epsilons.empty()) throw InvalidArgument("epsilon_sweep: empty grid");
  std::vector<ExperimentConfig> configs;
  for (double eps : epsilons) {
    if (!(eps >= 0.0)) throw InvalidArgument("epsilon_sweep: margins must be >= 0");
    ExperimentConfig c = base;
    c.acquisition = AcquisitionSpec{AcquisitionKind::ei, eps, base.acquisition.convention};
    c.strategy.clear();
    c.repeats = repeats;
    configs.push_back(std::move(c));
  }
  ExperimentConfig adaptive = base;
  adaptive.acquisition = AcquisitionSpec{AcquisitionKind::aei, 0.0, base.acquisition.convention};
  adaptive.strategy.clear();
  adaptive.repeats = repeats;
  configs.push_back(std::move(adaptive));

  SweepResult out;
  out.study = run_study(configs, options);
  out.epsilons.assign(epsilons.begin(), epsilons.end());
  for (std::size_t i = 0; i + 1 < out.study.strategies.size(); ++i) {
    out.fixed_mean_traces.push_back(out.study.strategies[i].mean_trace);
  }
  out.adaptive_mean_trace = out.study.strategies.back().mean_trace;
  out.risk = risk_area(out.fixed_mean_traces, out.adaptive_mean_trace, out.study.direction);
  return out;
}

}  // namespace ctxbo
