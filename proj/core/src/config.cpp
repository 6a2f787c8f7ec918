#include "ctxbo/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ctxbo {

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

bool is_builtin(std::string_view name) {
  const auto names = builtin_objective_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

double parse_real(std::string_view text, std::string_view key, std::size_t line) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError("'" + std::string(key) + "' expects a finite number, got '" +
                          std::string(text) + "'",
                      line);
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view text, std::string_view key, std::size_t line) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("'" + std::string(key) + "' expects a non-negative integer, got '" +
                          std::string(text) + "'",
                      line);
  }
  return v;
}

std::size_t parse_count(std::string_view text, std::string_view key, std::size_t line,
                        std::size_t minimum) {
  const std::uint64_t v = parse_unsigned(text, key, line);
  if (v < minimum) {
    throw ConfigError("'" + std::string(key) + "' must be >= " + std::to_string(minimum), line);
  }
  return static_cast<std::size_t>(v);
}

std::vector<Interval> parse_bounds(std::string_view text, std::size_t line) {
  // lower:upper, lower:upper, ...
  std::vector<Interval> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = trim(text.substr(pos, comma == std::string_view::npos ? comma : comma - pos));
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ConfigError("'bounds' entries must look like lower:upper, got '" + std::string(item) +
                            "'",
                        line);
    }
    Interval iv{parse_real(trim(item.substr(0, colon)), "bounds", line),
                parse_real(trim(item.substr(colon + 1)), "bounds", line)};
    if (!(iv.lower < iv.upper)) {
      throw ConfigError("'bounds' needs lower < upper in every dimension", line);
    }
    out.push_back(iv);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <typename F>
auto with_line(std::size_t line, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what(), line);
  }
}

struct PendingStrategy {
  StrategyConfig strategy;
  bool has_acquisition = false;
  bool has_epsilon = false;
  std::size_t line = 0;
};

}  // namespace

ConfigError::ConfigError(const std::string& what, std::size_t line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::string StrategyConfig::label() const { return name.empty() ? acquisition.label() : name; }

std::vector<StrategyConfig> default_strategies() {
  return {{"", AcquisitionSpec{AcquisitionKind::aei, 0.0}},
          {"", AcquisitionSpec{AcquisitionKind::ei, 0.0}},
          {"", AcquisitionSpec{AcquisitionKind::ei, 0.3}}};
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

StudyConfig parse_config(std::istream& in) {
  StudyConfig config;
  std::set<std::string> seen_study;
  std::set<std::string> seen_names;
  std::vector<PendingStrategy> strategies;
  PendingStrategy top;
  top.line = 0;
  bool top_used = false;
  bool in_strategy = false;
  std::set<std::string> seen_in_section;
  std::optional<MarginConvention> convention;

  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty() || text.front() == '#' || text.front() == ';') continue;

    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("unterminated section header", line);
      const auto inner = trim(text.substr(1, text.size() - 2));
      if (inner == "study") {
        if (in_strategy) throw ConfigError("[study] must come before any [strategy] section", line);
        continue;
      }
      if (inner.substr(0, 8) != "strategy" ||
          (inner.size() > 8 && !std::isspace(static_cast<unsigned char>(inner[8])))) {
        throw ConfigError("unknown section [" + std::string(inner) + "]", line);
      }
      PendingStrategy next;
      next.strategy.name = std::string(trim(inner.substr(8)));
      next.line = line;
      if (!next.strategy.name.empty() && !seen_names.insert(next.strategy.name).second) {
        throw ConfigError("duplicate strategy '" + next.strategy.name + "'", line);
      }
      strategies.push_back(std::move(next));
      seen_in_section.clear();
      in_strategy = true;
      continue;
    }

    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key = value", line);
    const std::string key(trim(text.substr(0, eq)));
    const std::string_view value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line);
    if (value.empty()) throw ConfigError("'" + key + "' has no value", line);

    if (in_strategy) {
      if (!seen_in_section.insert(key).second) {
        throw ConfigError("duplicate key '" + key + "'", line);
      }
      PendingStrategy& s = strategies.back();
      if (key == "acquisition") {
        s.strategy.acquisition.kind =
            with_line(line, [&] { return acquisition_kind_from_string(value); });
        s.has_acquisition = true;
      } else if (key == "epsilon") {
        s.strategy.acquisition.margin = parse_real(value, key, line);
        if (s.strategy.acquisition.margin < 0.0) {
          throw ConfigError("'epsilon' must be >= 0", line);
        }
        s.has_epsilon = true;
      } else {
        throw ConfigError("unknown key '" + key + "' in [strategy] section", line);
      }
      continue;
    }

    if (!seen_study.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line);
    if (key == "objective") {
      config.objective = std::string(value);
    } else if (key == "command") {
      config.command = std::string(value);
    } else if (key == "bounds") {
      config.bounds = parse_bounds(value, line);
    } else if (key == "direction") {
      config.direction = with_line(line, [&] { return direction_from_string(value); });
    } else if (key == "timeout") {
      config.timeout_seconds = parse_real(value, key, line);
      if (!(config.timeout_seconds > 0.0)) throw ConfigError("'timeout' must be > 0", line);
    } else if (key == "n_init") {
      config.n_init = parse_count(value, key, line, 1);
    } else if (key == "budget") {
      config.budget = parse_count(value, key, line, 0);
    } else if (key == "repeats") {
      config.repeats = parse_count(value, key, line, 1);
    } else if (key == "seed") {
      config.seed = parse_unsigned(value, key, line);
    } else if (key == "candidates") {
      config.search.candidates = parse_count(value, key, line, 1);
    } else if (key == "refine_starts") {
      config.search.refine_starts = parse_count(value, key, line, 0);
    } else if (key == "refine_evaluations_per_dimension") {
      const std::size_t v = parse_count(value, key, line, 1);
      if (v > 1000000) throw ConfigError("'" + key + "' is too large", line);
      config.search.refine_evaluations_per_dimension = static_cast<int>(v);
    } else if (key == "bootstrap_resamples") {
      config.bootstrap_resamples = parse_count(value, key, line, 1);
    } else if (key == "hyper_restarts") {
      const std::size_t v = parse_count(value, key, line, 1);
      if (v > 10000) throw ConfigError("'hyper_restarts' is too large", line);
      config.hyper_restarts = static_cast<int>(v);
    } else if (key == "margin_convention") {
      convention = with_line(line, [&] { return margin_convention_from_string(value); });
    } else if (key == "acquisition") {
      top.strategy.acquisition.kind =
          with_line(line, [&] { return acquisition_kind_from_string(value); });
      top.has_acquisition = true;
      top.line = line;
      top_used = true;
    } else if (key == "epsilon") {
      top.strategy.acquisition.margin = parse_real(value, key, line);
      if (top.strategy.acquisition.margin < 0.0) throw ConfigError("'epsilon' must be >= 0", line);
      top.has_epsilon = true;
      if (top.line == 0) top.line = line;
      top_used = true;
    } else {
      throw ConfigError("unknown key '" + key + "'", line);
    }
  }

  if (config.objective.empty()) throw ConfigError("missing required key 'objective'");
  if (config.objective != "subprocess") {
    for (const char* key : {"command", "bounds", "direction", "timeout"}) {
      if (seen_study.count(key)) {
        throw ConfigError(std::string("'") + key + "' only applies to objective = subprocess");
      }
    }
  }
  if (top_used && !strategies.empty()) {
    throw ConfigError("top-level acquisition/epsilon cannot be combined with [strategy] sections",
                      top.line);
  }
  if (top_used) strategies.push_back(top);

  for (auto& s : strategies) {
    if (!s.has_acquisition) {
      if (!s.has_epsilon) throw ConfigError("strategy has no 'acquisition'", s.line);
      s.strategy.acquisition.kind = AcquisitionKind::ei;
    }
    s.strategy.acquisition.convention = convention.value_or(MarginConvention::raise_target);
    with_line(s.line, [&] {
      s.strategy.acquisition.validate();
      return 0;
    });
    config.strategies.push_back(s.strategy);
  }
  if (config.strategies.empty()) {
    config.strategies = default_strategies();
    for (auto& s : config.strategies) {
      s.acquisition.convention = convention.value_or(MarginConvention::raise_target);
    }
  }
  config.convention = convention.value_or(MarginConvention::raise_target);

  validate(config);
  return config;
}

StudyConfig parse_config_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

StudyConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void validate(const StudyConfig& config) {
  if (config.objective.empty()) throw ConfigError("missing required key 'objective'");
  if (config.objective == "subprocess") {
    if (config.command.empty()) throw ConfigError("objective = subprocess needs 'command'");
    if (config.bounds.empty()) throw ConfigError("objective = subprocess needs 'bounds'");
    try {
      (void)Bounds(config.bounds);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    if (!(config.timeout_seconds > 0.0) || !std::isfinite(config.timeout_seconds)) {
      throw ConfigError("'timeout' must be > 0");
    }
  } else if (is_builtin(config.objective)) {
    if (!config.command.empty() || !config.bounds.empty()) {
      throw ConfigError("'command' and 'bounds' only apply to objective = subprocess");
    }
  } else {
    throw ConfigError("unknown objective '" + config.objective +
                      "' (expected branin, camelback, hartmann6 or subprocess)");
  }
  if (config.n_init < 1) throw ConfigError("'n_init' must be >= 1");
  if (config.repeats < 1) throw ConfigError("'repeats' must be >= 1");
  if (config.search.candidates < 1) throw ConfigError("'candidates' must be >= 1");
  if (config.search.refine_evaluations_per_dimension < 1) {
    throw ConfigError("'refine_evaluations_per_dimension' must be >= 1");
  }
  if (config.bootstrap_resamples < 1) throw ConfigError("'bootstrap_resamples' must be >= 1");
  if (config.hyper_restarts < 1) throw ConfigError("'hyper_restarts' must be >= 1");
  if (config.strategies.empty()) throw ConfigError("no strategies configured");
  std::set<std::string> labels;
  for (const auto& s : config.strategies) {
    try {
      s.acquisition.validate();
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    if (s.acquisition.convention != config.convention) {
      throw ConfigError("strategies must share the study's margin convention");
    }
    if (!labels.insert(s.label()).second) {
      throw ConfigError("duplicate strategy '" + s.label() + "'");
    }
  }
}

void apply_overrides(StudyConfig& config, const ConfigOverrides& o) {
  if (o.objective) {
    config.objective = *o.objective;
    if (config.objective != "subprocess") {
      config.command.clear();
      config.bounds.clear();
    }
  }
  if (o.budget) config.budget = *o.budget;
  if (o.repeats) config.repeats = *o.repeats;
  if (o.seed) config.seed = *o.seed;
  if (o.acquisition || o.epsilon) {
    StrategyConfig s;
    s.acquisition.kind = o.acquisition.value_or(AcquisitionKind::ei);
    s.acquisition.margin = o.epsilon.value_or(0.0);
    s.acquisition.convention = config.convention;
    if (s.acquisition.margin < 0.0) throw ConfigError("'--epsilon' must be >= 0");
    config.strategies = {s};
  }
  validate(config);
}

std::string emit_config(const StudyConfig& config) {
  std::ostringstream out;
  out << "[study]\n";
  out << "objective = " << config.objective << "\n";
  if (config.objective == "subprocess") {
    out << "command = " << config.command << "\n";
    out << "bounds = ";
    for (std::size_t i = 0; i < config.bounds.size(); ++i) {
      if (i > 0) out << ", ";
      out << format_double(config.bounds[i].lower) << ':' << format_double(config.bounds[i].upper);
    }
    out << "\n";
    out << "direction = " << to_string(config.direction) << "\n";
    out << "timeout = " << format_double(config.timeout_seconds) << "\n";
  }
  out << "n_init = " << config.n_init << "\n";
  out << "budget = " << config.budget << "\n";
  out << "repeats = " << config.repeats << "\n";
  out << "seed = " << config.seed << "\n";
  out << "candidates = " << config.search.candidates << "\n";
  out << "refine_starts = " << config.search.refine_starts << "\n";
  out << "refine_evaluations_per_dimension = " << config.search.refine_evaluations_per_dimension
      << "\n";
  out << "bootstrap_resamples = " << config.bootstrap_resamples << "\n";
  out << "hyper_restarts = " << config.hyper_restarts << "\n";
  out << "margin_convention = " << to_string(config.convention) << "\n";
  for (const auto& s : config.strategies) {
    out << "\n[strategy";
    if (!s.name.empty()) out << ' ' << s.name;
    out << "]\n";
    out << "acquisition = " << to_string(s.acquisition.kind) << "\n";
    out << "epsilon = " << format_double(s.acquisition.margin) << "\n";
  }
  return out.str();
}

Objective make_objective(const StudyConfig& config) {
  if (config.objective != "subprocess") return builtin_objective(config.objective);
  Bounds bounds(config.bounds);
  SubprocessOptions options;
  options.timeout = std::chrono::milliseconds(
      static_cast<std::chrono::milliseconds::rep>(std::llround(config.timeout_seconds * 1000.0)));
  if (options.timeout.count() < 1) options.timeout = std::chrono::milliseconds(1);
  return subprocess_objective(config.command, bounds.dimension(), bounds, config.direction,
                              options);
}

std::vector<ExperimentConfig> experiment_configs(const StudyConfig& config) {
  validate(config);
  const Objective objective = make_objective(config);
  std::vector<ExperimentConfig> out;
  for (const auto& s : config.strategies) {
    ExperimentConfig c(objective, s.acquisition);
    c.strategy = s.label();
    c.n_init = config.n_init;
    c.budget = config.budget;
    c.repeats = config.repeats;
    c.master_seed = config.seed;
    c.candidate_budget = config.search;
    c.bootstrap_resamples = config.bootstrap_resamples;
    c.hyper_restarts = config.hyper_restarts;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace ctxbo
