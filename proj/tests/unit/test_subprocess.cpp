#include <gtest/gtest.h>

#include <chrono>
#include <string>
#include <vector>

#include "ctxbo/objectives.hpp"
#include "oracles.hpp"

using namespace ctxbo;
using namespace std::chrono_literals;

namespace {

Objective stub(const std::string& args, SubprocessOptions options = {}) {
  return subprocess_objective(std::string(CTXBO_STUB_PATH) + " " + args, 3,
                              Bounds(std::vector<Interval>(3, Interval{0.0, 5.0})),
                              Direction::minimize, options);
}

const std::vector<double> kX{1.0, 2.0, 3.0};

}  // namespace

TEST(Subprocess, EvaluatesThroughTheLineProtocol) {
  EXPECT_EQ(stub("sum")(kX), 6.0);
}

TEST(Subprocess, SessionKeepsOneChildAlive) {
  const Objective o = stub("count");
  Evaluator e = o.session();
  EXPECT_EQ(e(kX), 1.0);
  EXPECT_EQ(e(kX), 2.0);
  EXPECT_EQ(e(kX), 3.0);
  Evaluator fresh = o.session();
  EXPECT_EQ(fresh(kX), 1.0);
}

TEST(Subprocess, NonzeroExitReportsStderr) {
  try {
    (void)stub("fail")(kX);
    FAIL() << "expected EvaluationError";
  } catch (const EvaluationError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("simulated failure"), std::string::npos) << what;
    EXPECT_NE(what.find("3"), std::string::npos) << what;
  }
}

TEST(Subprocess, TimesOut) {
  const auto start = std::chrono::steady_clock::now();
  EXPECT_THROW((void)stub("sleep 5", {200ms})(kX), EvaluationError);
  EXPECT_LT(std::chrono::steady_clock::now() - start, 3s);
}

TEST(Subprocess, RejectsMalformedReplies) {
  EXPECT_THROW((void)stub("garbage")(kX), EvaluationError);
  EXPECT_THROW((void)stub("no-y")(kX), EvaluationError);
}

TEST(Subprocess, RestartsAfterAFailure) {
  const std::string counter = oracle::temp_dir("subprocess_restart") + "/count";
  Evaluator e = stub("flaky " + counter).session();
  EXPECT_THROW((void)e(kX), EvaluationError);
  EXPECT_EQ(e(kX), 14.0);
  EXPECT_THROW((void)e(kX), EvaluationError);
  EXPECT_EQ(e(kX), 14.0);
}

TEST(Subprocess, FailureAfterSeveralRequests) {
  Evaluator e = stub("fail-after 2").session();
  EXPECT_EQ(e(kX), 6.0);
  EXPECT_EQ(e(kX), 6.0);
  EXPECT_THROW((void)e(kX), EvaluationError);
  EXPECT_EQ(e(kX), 6.0);  // restarted child
}

TEST(Subprocess, ValidatesArguments) {
  EXPECT_EQ(SubprocessOptions{}.timeout, std::chrono::milliseconds(300000));
  const Bounds b(std::vector<Interval>(2, Interval{0.0, 1.0}));
  EXPECT_THROW((void)subprocess_objective("", 2, b, Direction::minimize), InvalidArgument);
  EXPECT_THROW((void)subprocess_objective("true", 3, b, Direction::minimize), DimensionError);
  EXPECT_THROW((void)subprocess_objective("true", 2, b, Direction::minimize, {0ms}), InvalidArgument);
  EXPECT_THROW((void)stub("sum")(std::vector<double>{1.0}), DimensionError);
}
