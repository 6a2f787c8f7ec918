#include "ctxbo/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

namespace ctxbo {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const auto next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

double parse_field(std::string_view text, std::size_t line, const char* what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw IoError("trace csv line " + std::to_string(line) + ": bad " + what + " '" +
                  std::string(text) + "'");
  }
  return v;
}

std::size_t parse_index(std::string_view text, std::size_t line, const char* what) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw IoError("trace csv line " + std::to_string(line) + ": bad " + what + " '" +
                  std::string(text) + "'");
  }
  return v;
}

std::string fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string format_round_trip(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_trace_csv(std::ostream& out, std::span<const Trace> traces) {
  if (traces.empty()) throw InvalidArgument("trace csv: no traces");
  out << kTraceCsvHeader << '\n';
  for (const auto& t : traces) {
    if (t.strategy.find_first_of(",\n\"") != std::string::npos) {
      throw InvalidArgument("trace csv: strategy name '" + t.strategy +
                            "' contains a comma, quote or newline");
    }
    for (const auto& r : t.records) {
      out << t.strategy << ',' << t.repeat << ',' << r.iteration << ',';
      for (std::size_t i = 0; i < r.x.size(); ++i) {
        if (i > 0) out << ';';
        out << format_round_trip(r.x[i]);
      }
      out << ',' << format_round_trip(r.y) << ',' << format_round_trip(r.best_so_far) << ','
          << format_round_trip(r.contextual_variance) << ','
          << format_round_trip(r.mean_posterior_variance) << '\n';
    }
  }
}

void write_trace_csv(const std::string& path, std::span<const Trace> traces) {
  std::ostringstream out;
  emit_trace_csv(out, traces);
  write_file(path, out.str());
}

std::vector<Trace> parse_trace_csv(std::istream& in, Direction direction) {
  std::string raw;
  if (!std::getline(in, raw)) throw IoError("trace csv: empty input");
  if (!raw.empty() && raw.back() == '\r') raw.pop_back();
  if (raw != kTraceCsvHeader) throw IoError("trace csv: unexpected header '" + raw + "'");

  std::vector<Trace> traces;
  std::map<std::pair<std::string, std::size_t>, std::size_t> index;
  std::size_t line = 1;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) continue;
    const auto fields = split(raw, ',');
    if (fields.size() != 8) {
      throw IoError("trace csv line " + std::to_string(line) + ": expected 8 fields, got " +
                    std::to_string(fields.size()));
    }
    const std::string strategy(fields[0]);
    const std::size_t repeat = parse_index(fields[1], line, "repeat");
    auto [it, inserted] = index.try_emplace({strategy, repeat}, traces.size());
    if (inserted) {
      Trace t;
      t.strategy = strategy;
      t.repeat = repeat;
      t.direction = direction;
      traces.push_back(std::move(t));
    }
    Trace& trace = traces[it->second];

    TraceRecord r;
    r.iteration = parse_index(fields[2], line, "iteration");
    if (r.iteration != trace.records.size() + 1) {
      throw IoError("trace csv line " + std::to_string(line) + ": iteration " +
                    std::to_string(r.iteration) + " out of sequence");
    }
    if (!fields[3].empty()) {
      for (const auto part : split(fields[3], ';')) r.x.push_back(parse_field(part, line, "x"));
    }
    r.y = parse_field(fields[4], line, "y");
    r.best_so_far = parse_field(fields[5], line, "best_so_far");
    r.contextual_variance = parse_field(fields[6], line, "c_v");
    r.mean_posterior_variance = parse_field(fields[7], line, "mean_posterior_variance");
    trace.records.push_back(std::move(r));
  }
  if (traces.empty()) throw IoError("trace csv: no rows");
  for (auto& t : traces) {
    std::size_t n = 0;
    while (n < t.records.size() && std::isnan(t.records[n].contextual_variance)) ++n;
    t.n_init = n;
  }
  return traces;
}

std::vector<Trace> read_trace_csv(const std::string& path, Direction direction) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_trace_csv(in, direction);
}

Direction infer_direction(std::span<const Trace> traces) {
  bool can_min = true;
  bool can_max = true;
  for (const auto& t : traces) {
    for (std::size_t i = 1; i < t.records.size(); ++i) {
      const double prev = t.records[i - 1].best_so_far;
      const double cur = t.records[i].best_so_far;
      if (cur > prev) can_min = false;
      if (cur < prev) can_max = false;
    }
  }
  if (can_min) return Direction::minimize;
  if (can_max) return Direction::maximize;
  throw InvalidArgument("traces are not monotone in either direction; pass the direction");
}

StudySummary summarize_traces(std::vector<Trace> traces, std::string objective,
                              std::size_t bootstrap_resamples, std::uint64_t master_seed) {
  if (traces.empty()) throw InvalidArgument("summarize: no traces");
  StudySummary study;
  study.objective = std::move(objective);
  study.direction = traces.front().direction;
  study.n_init = traces.front().n_init;
  const std::size_t length = traces.front().records.size();
  study.budget = length >= study.n_init ? length - study.n_init : 0;

  std::vector<std::string> order;
  std::map<std::string, std::vector<Trace>> groups;
  for (auto& t : traces) {
    if (t.direction != study.direction) throw InvalidArgument("summarize: mixed directions");
    t.seed = repeat_seed(master_seed, t.repeat);
    auto& group = groups[t.strategy];
    if (group.empty()) order.push_back(t.strategy);
    group.push_back(std::move(t));
  }
  const std::uint64_t boot = study_bootstrap_seed(master_seed);
  for (const auto& name : order) {
    auto& group = groups[name];
    std::stable_sort(group.begin(), group.end(),
                     [](const Trace& a, const Trace& b) { return a.repeat < b.repeat; });
    study.strategies.push_back(
        summarize_strategy(name, std::move(group), study.budget, bootstrap_resamples, boot));
  }
  compute_z(study);
  return study;
}

void emit_summary(std::ostream& out, std::span<const StudySummary> studies) {
  for (const auto& study : studies) {
    out << "study " << study.objective << '\n';
    out << "direction " << to_string(study.direction) << '\n';
    out << "n_init " << study.n_init << '\n';
    out << "budget " << study.budget << '\n';
    out << '\n';
    out << pad("strategy", 14) << pad("repeats", 9) << pad("mean", 26) << pad("delta_ci", 26)
        << pad("mean_at_budget_incl_seeds", 27) << pad("z_search", 10) << pad("z_delta_ci", 12)
        << "z_overall\n";
    for (std::size_t i = 0; i < study.strategies.size(); ++i) {
      const auto& s = study.strategies[i];
      out << pad(s.strategy, 14) << pad(std::to_string(s.traces.size()), 9)
          << pad(format_round_trip(s.final_mean), 26) << pad(format_round_trip(s.delta_ci), 26)
          << pad(format_round_trip(s.mean_at_budget_including_seeds), 27)
          << pad(fixed(study.search_z[i], 4), 10) << pad(fixed(study.delta_ci_z[i], 4), 12)
          << fixed(study.overall_z[i], 4) << '\n';
    }
    for (const auto& s : study.strategies) {
      for (const auto& w : s.warnings) out << "warning " << s.strategy << ": " << w << '\n';
    }
    out << '\n';
  }
  if (studies.empty()) return;
  const OverallZ z = overall_z(studies);
  out << "overall Z over " << studies.size() << (studies.size() == 1 ? " study" : " studies")
      << '\n';
  out << pad("strategy", 14) << pad("search", 10) << pad("delta_ci", 10) << "overall\n";
  for (std::size_t i = 0; i < z.strategies.size(); ++i) {
    out << pad(z.strategies[i], 14) << pad(fixed(z.search[i], 4), 10)
        << pad(fixed(z.delta_ci[i], 4), 10) << fixed(z.overall[i], 4) << '\n';
  }
}

void write_summary(const std::string& path, std::span<const StudySummary> studies) {
  std::ostringstream out;
  emit_summary(out, studies);
  write_file(path, out.str());
}

void emit_sweep_summary(std::ostream& out, const SweepResult& sweep) {
  out << "\nrisk area relative to AEI over " << sweep.epsilons.size() << " margins\n";
  out << "loss " << format_round_trip(sweep.risk.loss) << '\n';
  out << "gain " << format_round_trip(sweep.risk.gain) << '\n';
}

void emit_manifest(std::ostream& out, const RunManifest& m) {
  out << "tool ctxbo " << m.tool_version << '\n';
  out << "command " << m.command << '\n';
  out << "master_seed " << m.master_seed << '\n';
  out << "started " << m.started << '\n';
  out << "finished " << m.finished << '\n';
  for (std::size_t i = 0; i < m.repeat_seeds.size(); ++i) {
    out << "repeat_seed " << i << ' ' << m.repeat_seeds[i] << '\n';
  }
  out << "\n# resolved configuration\n" << m.resolved_config;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace ctxbo
