#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "ctxbo/report.hpp"
#include "oracles.hpp"

using namespace ctxbo;

namespace {

StudySummary small_study(std::uint64_t seed) {
  Objective o("quadratic", Bounds({{-1.0, 1.0}, {0.0, 2.0}}), Direction::minimize, [] {
    return Evaluator([](std::span<const double> x) {
      return (x[0] - 0.2) * (x[0] - 0.2) + (x[1] - 1.1) * (x[1] - 1.1);
    });
  });
  std::vector<ExperimentConfig> configs;
  for (auto spec : {AcquisitionSpec{AcquisitionKind::aei}, AcquisitionSpec{AcquisitionKind::ei}}) {
    ExperimentConfig c(o, spec);
    c.budget = 6;
    c.repeats = 3;
    c.master_seed = seed;
    c.candidate_budget.candidates = 128;
    c.hyper_restarts = 2;
    c.bootstrap_resamples = 300;
    configs.push_back(c);
  }
  return run_study(configs, {1, 3});
}

std::vector<Trace> all_traces(const StudySummary& s) {
  std::vector<Trace> out;
  for (const auto& st : s.strategies) out.insert(out.end(), st.traces.begin(), st.traces.end());
  return out;
}

std::string summary_text(const StudySummary& s) {
  std::ostringstream out;
  emit_summary(out, std::span<const StudySummary>(&s, 1));
  return out.str();
}

}  // namespace

TEST(Report, RoundTripFormatting) {
  for (double v : {0.1, -1.0316284534898774, 1e-300, 3.0, 6.02214076e23}) {
    EXPECT_EQ(std::stod(format_round_trip(v)), v);
  }
  EXPECT_EQ(format_round_trip(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_round_trip(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Report, TraceCsvRoundTripsBitExactly) {
  const StudySummary s = small_study(4);
  const std::vector<Trace> traces = all_traces(s);
  std::ostringstream out;
  emit_trace_csv(out, traces);
  std::istringstream in(out.str());
  const std::vector<Trace> back = parse_trace_csv(in, Direction::minimize);
  ASSERT_EQ(back.size(), traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i) {
    EXPECT_EQ(back[i].strategy, traces[i].strategy);
    EXPECT_EQ(back[i].repeat, traces[i].repeat);
    EXPECT_EQ(back[i].n_init, 3u);
    ASSERT_EQ(back[i].records.size(), traces[i].records.size());
    for (std::size_t j = 0; j < traces[i].records.size(); ++j) {
      const auto& a = traces[i].records[j];
      const auto& b = back[i].records[j];
      EXPECT_EQ(a.x, b.x);
      EXPECT_EQ(a.y, b.y);
      EXPECT_EQ(a.best_so_far, b.best_so_far);
      EXPECT_TRUE(a.contextual_variance == b.contextual_variance ||
                  (std::isnan(a.contextual_variance) && std::isnan(b.contextual_variance)));
      EXPECT_TRUE(a.mean_posterior_variance == b.mean_posterior_variance ||
                  (std::isnan(a.mean_posterior_variance) && std::isnan(b.mean_posterior_variance)));
    }
  }
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), kTraceCsvHeader);
}

TEST(Report, SummaryFromCsvReproducesTheStudySummary) {
  const StudySummary s = small_study(11);
  std::ostringstream csv;
  emit_trace_csv(csv, all_traces(s));
  std::istringstream in(csv.str());
  std::vector<Trace> parsed = parse_trace_csv(in, Direction::minimize);
  EXPECT_EQ(infer_direction(parsed), Direction::minimize);
  const StudySummary again = summarize_traces(std::move(parsed), "quadratic", 300, 11);
  EXPECT_EQ(again.budget, 6u);
  EXPECT_EQ(summary_text(again), summary_text(s));
}

TEST(Report, SummaryLayout) {
  const std::string text = summary_text(small_study(2));
  EXPECT_EQ(text.rfind("study quadratic\ndirection minimize\nn_init 3\nbudget 6\n", 0), 0u);
  EXPECT_NE(text.find("mean_at_budget_incl_seeds"), std::string::npos);
  EXPECT_NE(text.find("\nAEI "), std::string::npos);
  EXPECT_NE(text.find("\nEI-0.0 "), std::string::npos);
  EXPECT_NE(text.find("overall Z over 1 study\n"), std::string::npos);
}

TEST(Report, RejectsMalformedCsv) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_trace_csv(in, Direction::minimize);
  };
  const std::string h = std::string(kTraceCsvHeader) + "\n";
  EXPECT_THROW((void)parse(""), IoError);
  EXPECT_THROW((void)parse("a,b,c\n"), IoError);
  EXPECT_THROW((void)parse(h), IoError);
  EXPECT_THROW((void)parse(h + "EI,0,1,0.5,1,1,nan\n"), IoError);
  EXPECT_THROW((void)parse(h + "EI,0,2,0.5,1,1,nan,nan\n"), IoError);
  EXPECT_THROW((void)parse(h + "EI,0,1,0.5,one,1,nan,nan\n"), IoError);
  const auto ok = parse(h + "EI,0,1,0.5;1.5,1,1,nan,nan\nEI,0,2,0.25;1,0.5,0.5,0.1,0.2\n");
  ASSERT_EQ(ok.size(), 1u);
  EXPECT_EQ(ok[0].n_init, 1u);
  EXPECT_EQ(ok[0].records[0].x, (std::vector<double>{0.5, 1.5}));
}

TEST(Report, InfersDirectionFromMonotoneTraces) {
  Trace up, flat;
  for (double v : {1.0, 2.0, 2.0}) up.records.push_back({0, {}, v, v});
  for (double v : {1.0, 1.0}) flat.records.push_back({0, {}, v, v});
  EXPECT_EQ(infer_direction(std::vector<Trace>{up}), Direction::maximize);
  EXPECT_EQ(infer_direction(std::vector<Trace>{flat}), Direction::minimize);
  Trace down = up;
  down.records[2].best_so_far = 0.5;
  EXPECT_THROW((void)infer_direction(std::vector<Trace>{down}), InvalidArgument);
}

TEST(Report, StrategyNamesMustBeCsvSafe) {
  Trace t;
  t.strategy = "a,b";
  t.records.push_back({1, {0.0}, 1.0, 1.0});
  std::ostringstream out;
  EXPECT_THROW(emit_trace_csv(out, std::vector<Trace>{t}), InvalidArgument);
}

TEST(Report, ManifestListsSeedsAndConfig) {
  RunManifest m{"1.0.0", "run --config a.cfg", "[study]\nobjective = branin\n", 7, {11, 12}, "s", "f"};
  std::ostringstream out;
  emit_manifest(out, m);
  const std::string text = out.str();
  EXPECT_NE(text.find("master_seed 7\n"), std::string::npos);
  EXPECT_NE(text.find("repeat_seed 1 12\n"), std::string::npos);
  EXPECT_NE(text.find("objective = branin"), std::string::npos);
  EXPECT_EQ(utc_timestamp().size(), 20u);
  const std::string dir = oracle::temp_dir("report_write");
  write_file(dir + "/f.txt", "abc");
  EXPECT_EQ(oracle::read_file(dir + "/f.txt"), "abc");
  EXPECT_THROW(write_file(dir + "/missing/f.txt", "x"), IoError);
}
