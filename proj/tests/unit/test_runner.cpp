#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <vector>

#include "ctxbo/runner.hpp"

using namespace ctxbo;

namespace {

Objective quadratic_1d() {
  return Objective("quadratic", Bounds({{0.0, 1.0}}), Direction::minimize, [] {
    return Evaluator([](std::span<const double> x) { return (x[0] - 0.3) * (x[0] - 0.3); });
  });
}

ExperimentConfig small(Objective o, AcquisitionSpec spec = {AcquisitionKind::ei}) {
  ExperimentConfig c(std::move(o), spec);
  c.budget = 10;
  c.repeats = 3;
  c.candidate_budget.candidates = 256;
  c.hyper_restarts = 2;
  c.bootstrap_resamples = 200;
  return c;
}

// Sessions whose index (in creation order) is listed fail on every call.
Objective failing_sessions(std::vector<int> bad) {
  auto counter = std::make_shared<std::atomic<int>>(0);
  return Objective("failing", Bounds({{0.0, 1.0}}), Direction::minimize, [counter, bad] {
    const int id = (*counter)++;
    const bool fails = std::find(bad.begin(), bad.end(), id) != bad.end();
    return Evaluator([fails](std::span<const double> x) {
      if (fails) throw EvaluationError("boom");
      return x[0] * x[0];
    });
  });
}

}  // namespace

TEST(Runner, ZeroBudgetEvaluatesOnlyTheSeeds) {
  ExperimentConfig c = small(quadratic_1d());
  c.budget = 0;
  c.n_init = 4;
  const Trace t = run_bo(c, 11);
  ASSERT_EQ(t.records.size(), 4u);
  for (const auto& r : t.records) EXPECT_TRUE(std::isnan(r.contextual_variance));
}

TEST(Runner, FindsTheMinimumOfAQuadratic) {
  ExperimentConfig c = small(quadratic_1d());
  c.budget = 15;
  const Trace t = run_bo(c, 5);
  ASSERT_EQ(t.records.size(), 18u);
  std::size_t best = 0;
  for (std::size_t i = 0; i < t.records.size(); ++i)
    if (t.records[i].y < t.records[best].y) best = i;
  EXPECT_NEAR(t.records[best].x[0], 0.3, 1e-2);
  EXPECT_EQ(t.final_best(), t.records[best].y);
}

TEST(Runner, BestSoFarIsMonotoneAndIterationsAreSequential) {
  for (auto spec : {AcquisitionSpec{AcquisitionKind::aei}, AcquisitionSpec{AcquisitionKind::pi, 0.1}}) {
    const Trace t = run_bo(small(quadratic_1d(), spec), 3);
    for (std::size_t i = 0; i < t.records.size(); ++i) {
      EXPECT_EQ(t.records[i].iteration, i + 1);
      if (i > 0) EXPECT_LE(t.records[i].best_so_far, t.records[i - 1].best_so_far);
      if (i >= 3) {
        EXPECT_GE(t.records[i].mean_posterior_variance, 0.0);
        EXPECT_GE(t.records[i].contextual_variance, 0.0);
      }
    }
  }
}

TEST(Runner, DeterministicForASeed) {
  const Trace a = run_bo(small(quadratic_1d()), 42);
  const Trace b = run_bo(small(quadratic_1d()), 42);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].x, b.records[i].x);
    EXPECT_EQ(a.records[i].y, b.records[i].y);
  }
}

TEST(Runner, InitialDesignDependsOnlyOnTheSeed) {
  const Trace ei = run_bo(small(quadratic_1d(), {AcquisitionKind::ei}), 8);
  const Trace aei = run_bo(small(quadratic_1d(), {AcquisitionKind::aei}), 8);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(ei.records[i].x, aei.records[i].x);
  const Trace other = run_bo(small(quadratic_1d()), 9);
  EXPECT_NE(other.records[0].x, ei.records[0].x);
}

TEST(Runner, StudyPairsSeedsAcrossStrategies) {
  const std::vector<ExperimentConfig> configs{small(quadratic_1d(), {AcquisitionKind::ei}),
                                              small(quadratic_1d(), {AcquisitionKind::aei})};
  const StudySummary s = run_study(configs, {1, 3});
  ASSERT_EQ(s.strategies.size(), 2u);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(s.strategies[0].traces[r].seed, repeat_seed(0, r));
    EXPECT_EQ(s.strategies[1].traces[r].seed, repeat_seed(0, r));
    EXPECT_EQ(s.strategies[0].traces[r].records[0].x, s.strategies[1].traces[r].records[0].x);
  }
  EXPECT_EQ(s.strategies[0].strategy, "EI-0.0");
  EXPECT_EQ(s.strategies[1].strategy, "AEI");
  EXPECT_EQ(s.search_z.size(), 2u);
}

TEST(Runner, SummaryMatchesAHandComputedMean) {
  const std::vector<ExperimentConfig> configs{small(quadratic_1d())};
  const StudySummary s = run_study(configs, {1, 3});
  const StrategySummary& st = s.strategies.front();
  for (std::size_t t = 0; t < st.mean_trace.size(); ++t) {
    double sum = 0.0;
    for (const auto& tr : st.traces) sum += tr.records[t].best_so_far;
    EXPECT_NEAR(st.mean_trace[t], sum / 3.0, 1e-15);
    EXPECT_LE(st.bands[t].low, st.bands[t].high);
  }
  EXPECT_EQ(st.final_mean, st.mean_trace.back());
  EXPECT_EQ(st.delta_ci, st.bands.back().width());
  EXPECT_EQ(st.mean_at_budget_including_seeds, st.mean_trace[9]);
}

TEST(Runner, AbortsAfterConsecutiveFailuresWithPartialTrace) {
  auto calls = std::make_shared<int>(0);
  Objective o("late-failure", Bounds({{0.0, 1.0}}), Direction::minimize, [calls] {
    return Evaluator([calls](std::span<const double> x) {
      if (++*calls > 4) throw EvaluationError("down");
      return x[0];
    });
  });
  try {
    (void)run_bo(small(o), 1);
    FAIL() << "expected AbortedRun";
  } catch (const AbortedRun& e) {
    EXPECT_EQ(e.partial().records.size(), 4u);
    EXPECT_EQ(e.partial().errors.size(), 3u);
    EXPECT_EQ(*calls, 7);
  }
}

TEST(Runner, RetriesTransientFailures) {
  auto calls = std::make_shared<int>(0);
  Objective o("flaky", Bounds({{0.0, 1.0}}), Direction::minimize, [calls] {
    return Evaluator([calls](std::span<const double> x) {
      if (++*calls % 2 == 1) throw EvaluationError("transient");
      return x[0];
    });
  });
  const Trace t = run_bo(small(o), 1);
  EXPECT_EQ(t.records.size(), 13u);
  EXPECT_EQ(t.errors.size(), 13u);
}

TEST(Runner, DropsFailedRepeatsAndEnforcesSurvivors) {
  ExperimentConfig c = small(failing_sessions({1}));
  c.repeats = 4;
  const std::vector<ExperimentConfig> configs{c};
  const StudySummary s = run_study(configs, {1, 3});
  ASSERT_EQ(s.strategies[0].traces.size(), 3u);
  EXPECT_EQ(s.strategies[0].traces[1].repeat, 2u);
  ASSERT_EQ(s.strategies[0].warnings.size(), 1u);
  EXPECT_NE(s.strategies[0].warnings[0].find("repeat 1"), std::string::npos);

  ExperimentConfig tight = small(failing_sessions({0, 2}));
  tight.repeats = 4;
  const std::vector<ExperimentConfig> failing{tight};
  EXPECT_THROW((void)run_study(failing, {1, 3}), Error);
}

TEST(Runner, RejectsMismatchedStrategies) {
  ExperimentConfig a = small(quadratic_1d());
  ExperimentConfig b = small(quadratic_1d(), {AcquisitionKind::aei});
  b.budget = 11;
  const std::vector<ExperimentConfig> mismatched{a, b};
  EXPECT_THROW((void)run_study(mismatched, {1, 3}), InvalidArgument);
  const std::vector<ExperimentConfig> duplicate{a, a};
  EXPECT_THROW((void)run_study(duplicate, {1, 3}), InvalidArgument);
}

TEST(Runner, ConstantObjectiveSweepHasNoRisk) {
  Objective flat("flat", Bounds({{0.0, 1.0}, {0.0, 1.0}}), Direction::minimize,
                 [] { return Evaluator([](std::span<const double>) { return 1.0; }); });
  ExperimentConfig c = small(flat);
  c.budget = 4;
  const std::vector<double> grid{0.0, 0.5};
  const SweepResult r = epsilon_sweep(c, grid, 2, {1, 2});
  EXPECT_EQ(r.study.strategies.size(), 3u);
  EXPECT_EQ(r.study.strategies.back().strategy, "AEI");
  EXPECT_EQ(r.risk.loss, 0.0);
  EXPECT_EQ(r.risk.gain, 0.0);
  for (double z : r.study.overall_z) EXPECT_EQ(z, 0.0);
}

TEST(Runner, EpsilonGridIncludesTheEndpoint) {
  const auto g = epsilon_grid(0.0, 1.0, 0.1);
  ASSERT_EQ(g.size(), 11u);
  EXPECT_EQ(g[3], 0.3);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_EQ(epsilon_grid(0.0, 0.99, 0.01).size(), 100u);
  EXPECT_THROW((void)epsilon_grid(0.5, 0.1, 0.1), InvalidArgument);
  EXPECT_THROW((void)epsilon_grid(0.0, 1.0, 0.0), InvalidArgument);
}

TEST(Runner, OverallZAveragesStudies) {
  StudySummary a, b;
  for (auto* s : {&a, &b}) {
    s->strategies.resize(2);
    s->strategies[0].strategy = "AEI";
    s->strategies[1].strategy = "EI-0.0";
  }
  a.search_z = {0.0, 1.0};
  a.delta_ci_z = {1.0, 0.0};
  b.search_z = {0.0, 1.0};
  b.delta_ci_z = {0.0, 1.0};
  const std::vector<StudySummary> studies{a, b};
  const OverallZ z = overall_z(studies);
  EXPECT_EQ(z.search, (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(z.delta_ci, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(z.overall, (std::vector<double>{0.25, 0.75}));
}
