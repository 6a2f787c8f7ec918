#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ctxbo/objectives.hpp"
#include "ctxbo/report.hpp"

namespace {

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) out += ' ';
    out += argv[i];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ctxbo;
  CLI::App app{"Bayesian optimization studies with adaptive expected improvement", "ctxbo"};
  app.set_version_flag("--version", std::string(CTXBO_VERSION));
  app.require_subcommand(1);

  cli::RunArgs run;
  std::string acquisition;
  double epsilon = 0.0;
  std::size_t budget = 0, repeats = 0;
  std::uint64_t seed = 0;
  std::string objective;
  auto* run_cmd = app.add_subcommand("run", "Run a study and write traces, summary and plot");
  run_cmd->add_option("--config", run.config, "Study configuration file")->required();
  auto* objective_opt = run_cmd->add_option("--objective", objective, "Objective name");
  auto* acq_opt = run_cmd->add_option("--acquisition", acquisition, "Single acquisition rule")
                      ->check(CLI::IsMember({"pi", "ei", "aei"}));
  auto* eps_opt = run_cmd->add_option("--epsilon", epsilon, "Margin for PI/EI")
                      ->check(CLI::NonNegativeNumber);
  auto* budget_opt = run_cmd->add_option("--budget", budget, "Acquisitions per run");
  auto* repeats_opt = run_cmd->add_option("--repeats", repeats, "Repeats per strategy")
                          ->check(CLI::PositiveNumber);
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Master seed");
  run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--threads", run.threads, "Worker threads (0: all cores)");

  cli::SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "EI over a grid of margins, compared with AEI");
  sweep_cmd->add_option("--config", sweep.config, "Study configuration file")->required();
  sweep_cmd->add_option("--eps-grid", sweep.eps_grid, "start:stop:step")->capture_default_str();
  sweep_cmd->add_flag("--fine-grid", sweep.fine_grid,
                      "100 margins 0.00..0.99 at 0.01 resolution");
  std::size_t sweep_repeats = 0, sweep_budget = 0;
  std::uint64_t sweep_seed = 0;
  auto* sweep_repeats_opt = sweep_cmd->add_option("--repeats", sweep_repeats, "Repeats (default 5)")
                                ->check(CLI::PositiveNumber);
  auto* sweep_budget_opt = sweep_cmd->add_option("--budget", sweep_budget, "Acquisitions per run");
  auto* sweep_seed_opt = sweep_cmd->add_option("--seed", sweep_seed, "Master seed");
  sweep_cmd->add_option("--out", sweep.out, "Output directory")->capture_default_str();
  sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (0: all cores)");

  cli::ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Re-render summary and plot from a trace CSV");
  report_cmd->add_option("--traces", report.traces, "Trace CSV")->required();
  report_cmd->add_option("--out", report.out, "Output directory")->capture_default_str();
  std::string direction;
  auto* direction_opt = report_cmd->add_option("--direction", direction, "minimize or maximize")
                            ->check(CLI::IsMember({"minimize", "maximize"}));
  report_cmd->add_option("--objective", report.objective, "Study name for the summary");
  report_cmd->add_option("--seed", report.seed, "Master seed of the original study");
  report_cmd->add_option("--bootstrap-resamples", report.bootstrap_resamples, "Bootstrap resamples")
      ->check(CLI::PositiveNumber);

  auto* selftest_cmd = app.add_subcommand("selftest", "Check objective optima and numerical oracles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kOk : cli::kUsage;
  }

  try {
    if (*run_cmd) {
      run.command_line = join_args(argc, argv);
      if (*objective_opt) run.overrides.objective = objective;
      if (*acq_opt) run.overrides.acquisition = acquisition_kind_from_string(acquisition);
      if (*eps_opt) run.overrides.epsilon = epsilon;
      if (*budget_opt) run.overrides.budget = budget;
      if (*repeats_opt) run.overrides.repeats = repeats;
      if (*seed_opt) run.overrides.seed = seed;
      return cli::run_command(run);
    }
    if (*sweep_cmd) {
      sweep.command_line = join_args(argc, argv);
      if (*sweep_repeats_opt) sweep.repeats = sweep_repeats;
      if (*sweep_budget_opt) sweep.budget = sweep_budget;
      if (*sweep_seed_opt) sweep.seed = sweep_seed;
      return cli::sweep_command(sweep);
    }
    if (*report_cmd) {
      if (*direction_opt) report.direction = direction;
      return cli::report_command(report);
    }
    if (*selftest_cmd) return cli::selftest_command();
  } catch (const ConfigError& e) {
    std::cerr << "ctxbo: config error: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "ctxbo: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "ctxbo: " << e.what() << '\n';
    return cli::kRuntime;
  }
  return cli::kUsage;
}
