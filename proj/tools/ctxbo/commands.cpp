#include "commands.hpp"

#include <charconv>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "ctxbo/report.hpp"
#include "ctxbo/runner.hpp"
#include "ctxbo/svg.hpp"

namespace ctxbo::cli {

namespace {

namespace fs = std::filesystem;

std::string in_dir(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

void make_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

std::vector<Trace> all_traces(const StudySummary& study) {
  std::vector<Trace> out;
  for (const auto& s : study.strategies) out.insert(out.end(), s.traces.begin(), s.traces.end());
  return out;
}

std::vector<std::uint64_t> seeds_of(const StudyConfig& config) {
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < config.repeats; ++i) seeds.push_back(repeat_seed(config.seed, i));
  return seeds;
}

double parse_grid_value(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("--eps-grid expects start:stop:step, got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_grid(const std::string& spec) {
  const auto a = spec.find(':');
  const auto b = a == std::string::npos ? a : spec.find(':', a + 1);
  if (b == std::string::npos) throw ConfigError("--eps-grid expects start:stop:step");
  const std::string_view s(spec);
  try {
    return epsilon_grid(parse_grid_value(s.substr(0, a)), parse_grid_value(s.substr(a + 1, b - a - 1)),
                        parse_grid_value(s.substr(b + 1)));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

void report_warnings(const StudySummary& study) {
  for (const auto& s : study.strategies) {
    for (const auto& w : s.warnings) std::cerr << "ctxbo: warning: " << s.strategy << ": " << w << '\n';
  }
}

}  // namespace

int run_command(const RunArgs& args) {
  StudyConfig config = load_config(args.config);
  apply_overrides(config, args.overrides);
  const std::vector<ExperimentConfig> experiments = experiment_configs(config);
  make_dir(args.out);
  const std::string resolved = emit_config(config);
  write_file(in_dir(args.out, "config.resolved"), resolved);

  RunManifest manifest;
  manifest.tool_version = CTXBO_VERSION;
  manifest.command = args.command_line;
  manifest.resolved_config = resolved;
  manifest.master_seed = config.seed;
  manifest.repeat_seeds = seeds_of(config);
  manifest.started = utc_timestamp();

  StudyOptions options;
  options.threads = args.threads;
  const StudySummary study = run_study(experiments, options);
  report_warnings(study);

  const std::vector<Trace> traces = all_traces(study);
  write_trace_csv(in_dir(args.out, "traces.csv"), traces);
  std::ostringstream summary;
  emit_summary(summary, std::span<const StudySummary>(&study, 1));
  write_file(in_dir(args.out, "summary.txt"), summary.str());
  write_study_plot(in_dir(args.out, "plot.svg"), study);

  manifest.finished = utc_timestamp();
  std::ostringstream m;
  emit_manifest(m, manifest);
  write_file(in_dir(args.out, "manifest.txt"), m.str());

  std::cout << summary.str();
  return kOk;
}

int sweep_command(const SweepArgs& args) {
  StudyConfig config = load_config(args.config);
  const std::vector<double> grid = args.fine_grid ? epsilon_grid(0.0, 0.99, 0.01)
                                                        : parse_grid(args.eps_grid);
  config.repeats = args.repeats.value_or(5);
  if (args.budget) config.budget = *args.budget;
  if (args.seed) config.seed = *args.seed;
  config.strategies.clear();
  for (double eps : grid) {
    config.strategies.push_back({"", AcquisitionSpec{AcquisitionKind::ei, eps, config.convention}});
  }
  config.strategies.push_back({"", AcquisitionSpec{AcquisitionKind::aei, 0.0, config.convention}});
  validate(config);

  const std::vector<ExperimentConfig> experiments = experiment_configs(config);
  make_dir(args.out);
  const std::string resolved = emit_config(config);
  write_file(in_dir(args.out, "config.resolved"), resolved);

  RunManifest manifest;
  manifest.tool_version = CTXBO_VERSION;
  manifest.command = args.command_line;
  manifest.resolved_config = resolved;
  manifest.master_seed = config.seed;
  manifest.repeat_seeds = seeds_of(config);
  manifest.started = utc_timestamp();

  StudyOptions options;
  options.threads = args.threads;
  const SweepResult sweep = epsilon_sweep(experiments.front(), grid, config.repeats, options);
  report_warnings(sweep.study);

  write_trace_csv(in_dir(args.out, "traces.csv"), all_traces(sweep.study));
  std::ostringstream summary;
  emit_summary(summary, std::span<const StudySummary>(&sweep.study, 1));
  emit_sweep_summary(summary, sweep);
  write_file(in_dir(args.out, "summary.txt"), summary.str());
  write_sweep_plot(in_dir(args.out, "plot.svg"), sweep);

  manifest.finished = utc_timestamp();
  std::ostringstream m;
  emit_manifest(m, manifest);
  write_file(in_dir(args.out, "manifest.txt"), m.str());

  std::cout << summary.str();
  return kOk;
}

int report_command(const ReportArgs& args) {
  std::vector<Trace> traces = read_trace_csv(args.traces, Direction::minimize);
  const Direction direction =
      args.direction ? direction_from_string(*args.direction) : infer_direction(traces);
  for (auto& t : traces) t.direction = direction;
  const StudySummary study =
      summarize_traces(std::move(traces), args.objective, args.bootstrap_resamples, args.seed);
  make_dir(args.out);
  std::ostringstream summary;
  emit_summary(summary, std::span<const StudySummary>(&study, 1));
  write_file(in_dir(args.out, "summary.txt"), summary.str());
  write_study_plot(in_dir(args.out, "plot.svg"), study);
  std::cout << summary.str();
  return kOk;
}

}  // namespace ctxbo::cli
