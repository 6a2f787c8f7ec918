#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxbo/types.hpp"

namespace ctxbo {

using Evaluator = std::function<double(std::span<const double>)>;

/// Objective evaluation failed (child crash, malformed reply, timeout).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

struct KnownOptimum {
  std::vector<std::vector<double>> locations;
  double value = 0.0;
  double tolerance = 0.0;
};

/// A named black-box function over a box, with a fixed optimization direction.
///
/// Evaluation goes through sessions: session() returns an evaluator that owns
/// whatever per-run state the objective needs (for external objectives, one
/// child process). Built-in objectives hand out stateless evaluators.
class Objective {
 public:
  Objective(std::string name, Bounds bounds, Direction direction,
            std::function<Evaluator()> session_factory,
            std::optional<KnownOptimum> known_optimum = std::nullopt);

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] std::size_t dimension() const { return bounds_.dimension(); }
  [[nodiscard]] const Bounds& bounds() const { return bounds_; }
  [[nodiscard]] Direction direction() const { return direction_; }
  [[nodiscard]] const std::optional<KnownOptimum>& known_optimum() const { return optimum_; }
  /// True for the negated wrapper produced by as_internal_max on a minimization objective.
  [[nodiscard]] bool negated() const { return negated_; }

  [[nodiscard]] Evaluator session() const { return factory_(); }
  /// One-off evaluation through a fresh session.
  [[nodiscard]] double operator()(std::span<const double> x) const;

 private:
  friend Objective as_internal_max(const Objective& objective);

  std::string name_;
  Bounds bounds_;
  Direction direction_;
  std::function<Evaluator()> factory_;
  std::optional<KnownOptimum> optimum_;
  bool negated_ = false;
};

/// Branin-Hoo on [-5,10] x [0,15]; minimum 0.397887.
[[nodiscard]] double branin(std::span<const double> x);
/// Six-hump camelback on [-3,3] x [-2,2]; minimum -1.0316.
[[nodiscard]] double camelback(std::span<const double> x);
/// Hartmann-6 on [0,1]^6, served in maximization form; maximum 3.32237.
[[nodiscard]] double hartmann6(std::span<const double> x);

[[nodiscard]] Objective branin_objective();
[[nodiscard]] Objective camelback_objective();
[[nodiscard]] Objective hartmann6_objective();

[[nodiscard]] std::vector<std::string> builtin_objective_names();
/// Throws InvalidArgument for unknown names.
[[nodiscard]] Objective builtin_objective(std::string_view name);

/// Minimization objectives are negated and flipped to maximize; maximization
/// objectives (including already-wrapped ones) pass through unchanged.
[[nodiscard]] Objective as_internal_max(const Objective& objective);

struct SubprocessOptions {
  std::chrono::milliseconds timeout{std::chrono::seconds(300)};
};

/// External objective speaking the line protocol
///   request  {"x":[f64,...]}\n   (to the child's stdin)
///   response {"y":f64}\n         (from the child's stdout)
/// The command runs under /bin/sh -c. One child per session, kept alive
/// across evaluations and restarted after a failure.
[[nodiscard]] Objective subprocess_objective(std::string command, std::size_t dimension,
                                             Bounds bounds, Direction direction,
                                             SubprocessOptions options = {});

struct SelfTestResult {
  std::string objective;
  std::vector<double> location;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  [[nodiscard]] bool passed() const;
};

/// Evaluates every built-in objective at each known optimum.
[[nodiscard]] std::vector<SelfTestResult> self_test_objectives();

}  // namespace ctxbo
