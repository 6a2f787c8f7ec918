#pragma once

// Text artifacts of a study: trace CSV, summary tables and the run manifest.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ctxbo/runner.hpp"

namespace ctxbo {

class IoError : public Error {
 public:
  using Error::Error;
};

inline constexpr const char* kTraceCsvHeader =
    "strategy,repeat,iteration,x,y,best_so_far,c_v,mean_posterior_variance";

/// 17 significant digits; reads back bit-identically.
[[nodiscard]] std::string format_round_trip(double v);

/// One row per trace record. `x` is semicolon-joined; c_v and the mean
/// posterior variance are "nan" for the initial design.
void emit_trace_csv(std::ostream& out, std::span<const Trace> traces);
void write_trace_csv(const std::string& path, std::span<const Trace> traces);

/// Inverse of emit_trace_csv. Rows are grouped into traces by
/// (strategy, repeat) in order of first appearance. The CSV does not carry
/// the direction; it is set from `direction`. n_init is recovered from the
/// leading rows without a c_v value.
[[nodiscard]] std::vector<Trace> parse_trace_csv(std::istream& in, Direction direction);
[[nodiscard]] std::vector<Trace> read_trace_csv(const std::string& path, Direction direction);

/// Direction under which every best-so-far column is monotone; ties and
/// constant traces resolve to minimize. Throws if no direction fits.
[[nodiscard]] Direction infer_direction(std::span<const Trace> traces);

/// Regroups parsed traces into a study summary (strategies in order of
/// first appearance).
[[nodiscard]] StudySummary summarize_traces(std::vector<Trace> traces, std::string objective,
                                            std::size_t bootstrap_resamples,
                                            std::uint64_t master_seed);

/// Per-strategy Mean / ΔCI table and per-experiment Z scores for each
/// study, followed by the Search / ΔCI / Overall Z table averaged over all
/// studies.
void emit_summary(std::ostream& out, std::span<const StudySummary> studies);
void write_summary(const std::string& path, std::span<const StudySummary> studies);

/// Risk-area section appended to a sweep summary.
void emit_sweep_summary(std::ostream& out, const SweepResult& sweep);

struct RunManifest {
  std::string tool_version;
  std::string command;          // verb and arguments as given
  std::string resolved_config;  // emit_config output
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> repeat_seeds;
  std::string started;   // UTC, ISO 8601
  std::string finished;  // UTC, ISO 8601
};

void emit_manifest(std::ostream& out, const RunManifest& manifest);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
[[nodiscard]] std::string utc_timestamp();

/// Writes `content` to `path`, throwing IoError on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace ctxbo
