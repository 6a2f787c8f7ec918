#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ctxbo/config.hpp"

namespace ctxbo::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kRuntime = 2, kSelfTestFailed = 3 };

struct RunArgs {
  std::string config;
  ConfigOverrides overrides;
  std::string out = "ctxbo-out";
  unsigned threads = 0;
  std::string command_line;
};

struct SweepArgs {
  std::string config;
  std::string eps_grid = "0:1:0.1";
  bool fine_grid = false;
  std::optional<std::size_t> repeats;
  std::optional<std::size_t> budget;
  std::optional<std::uint64_t> seed;
  std::string out = "ctxbo-sweep";
  unsigned threads = 0;
  std::string command_line;
};

struct ReportArgs {
  std::string traces;
  std::string out = "ctxbo-report";
  std::optional<std::string> direction;
  std::string objective = "study";
  std::uint64_t seed = 0;
  std::size_t bootstrap_resamples = 1000;
};

int run_command(const RunArgs& args);
int sweep_command(const SweepArgs& args);
int report_command(const ReportArgs& args);
int selftest_command();

}  // namespace ctxbo::cli
