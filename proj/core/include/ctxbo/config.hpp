#pragma once

// Plain-text study configuration: sectioned key = value files.
//
//   objective = camelback
//   budget = 50
//
//   [strategy AEI]
//   acquisition = aei
//
// Keys before the first section (or inside [study]) describe the study;
// each [strategy NAME] section adds one acquisition rule. A top-level
// `acquisition`/`epsilon` pair declares a single unnamed strategy.

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctxbo/acquisition.hpp"
#include "ctxbo/runner.hpp"
#include "ctxbo/sampling.hpp"
#include "ctxbo/types.hpp"

namespace ctxbo {

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0);
  /// 1-based line of the offending entry, 0 when not tied to a line.
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct StrategyConfig {
  std::string name;  // empty: derived from the acquisition
  AcquisitionSpec acquisition;

  [[nodiscard]] std::string label() const;
  friend bool operator==(const StrategyConfig&, const StrategyConfig&) = default;
};

struct StudyConfig {
  std::string objective;
  // Only meaningful for objective = subprocess.
  std::string command;
  std::vector<Interval> bounds;
  Direction direction = Direction::minimize;
  double timeout_seconds = 300.0;

  std::size_t n_init = 3;
  std::size_t budget = 50;
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
  SearchBudget search;
  std::size_t bootstrap_resamples = 1000;
  int hyper_restarts = 5;
  MarginConvention convention = MarginConvention::raise_target;
  std::vector<StrategyConfig> strategies;

  friend bool operator==(const StudyConfig&, const StudyConfig&) = default;
};

/// AEI, EI-0.0 and EI-0.3.
[[nodiscard]] std::vector<StrategyConfig> default_strategies();

/// Parses and validates a configuration; missing strategies get the defaults.
[[nodiscard]] StudyConfig parse_config(std::istream& in);
[[nodiscard]] StudyConfig parse_config_text(std::string_view text);
[[nodiscard]] StudyConfig load_config(const std::string& path);

/// Command-line values that take precedence over the file.
struct ConfigOverrides {
  std::optional<std::string> objective;
  std::optional<AcquisitionKind> acquisition;
  std::optional<double> epsilon;
  std::optional<std::size_t> budget;
  std::optional<std::size_t> repeats;
  std::optional<std::uint64_t> seed;
};

/// Applies overrides and re-validates. An acquisition or epsilon override
/// replaces the strategy list with that single rule (EI when only epsilon
/// is given).
void apply_overrides(StudyConfig& config, const ConfigOverrides& overrides);

/// Throws ConfigError when the configuration is inconsistent.
void validate(const StudyConfig& config);

/// Resolved configuration with every value spelled out; parse_config_text of
/// the result reproduces `config`.
[[nodiscard]] std::string emit_config(const StudyConfig& config);

[[nodiscard]] Objective make_objective(const StudyConfig& config);

/// One ExperimentConfig per strategy, sharing the study settings.
[[nodiscard]] std::vector<ExperimentConfig> experiment_configs(const StudyConfig& config);

/// Shortest decimal that reads back as the same double.
[[nodiscard]] std::string format_double(double v);

}  // namespace ctxbo
