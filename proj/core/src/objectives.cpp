#include "ctxbo/objectives.hpp"

#include <cmath>
#include <string>

#include "benchmark_constants.hpp"

namespace ctxbo {

namespace {

void require_size(std::span<const double> x, std::size_t d, const char* name) {
  if (x.size() != d) {
    throw DimensionError(std::string(name) + ": expected " + std::to_string(d) +
                         " coordinates, got " + std::to_string(x.size()));
  }
}

Objective make_builtin(std::string name, Bounds bounds, Direction direction,
                       double (*fn)(std::span<const double>), KnownOptimum optimum) {
  return Objective(std::move(name), std::move(bounds), direction,
                   [fn] { return Evaluator(fn); }, std::move(optimum));
}

}  // namespace

Objective::Objective(std::string name, Bounds bounds, Direction direction,
                     std::function<Evaluator()> session_factory,
                     std::optional<KnownOptimum> known_optimum)
    : name_(std::move(name)),
      bounds_(std::move(bounds)),
      direction_(direction),
      factory_(std::move(session_factory)),
      optimum_(std::move(known_optimum)) {
  if (!factory_) throw InvalidArgument("objective '" + name_ + "' has no evaluator");
  if (bounds_.dimension() == 0) throw InvalidArgument("objective '" + name_ + "' has no bounds");
}

double Objective::operator()(std::span<const double> x) const { return session()(x); }

double branin(std::span<const double> x) {
  require_size(x, 2, "branin");
  const auto& k = constants::branin;
  const double inner = x[1] - k.b * x[0] * x[0] + k.c * x[0] - k.r;
  return k.a * inner * inner + k.s * (1.0 - k.t) * std::cos(x[0]) + k.s;
}

double camelback(std::span<const double> x) {
  require_size(x, 2, "camelback");
  const double x1 = x[0];
  const double x2 = x[1];
  const double x1sq = x1 * x1;
  return (4.0 - 2.1 * x1sq + x1sq * x1sq / 3.0) * x1sq + x1 * x2 + (-4.0 + 4.0 * x2 * x2) * x2 * x2;
}

double hartmann6(std::span<const double> x) {
  require_size(x, 6, "hartmann6");
  double total = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < 6; ++j) {
      const double diff = x[j] - constants::hartmann6_p[i][j];
      inner += constants::hartmann6_a[i][j] * diff * diff;
    }
    total += constants::hartmann6_alpha[i] * std::exp(-inner);
  }
  return total;
}

Objective branin_objective() {
  KnownOptimum opt;
  for (const auto& loc : constants::branin_minimizers) opt.locations.push_back({loc[0], loc[1]});
  opt.value = constants::branin_minimum;
  opt.tolerance = 1e-5;
  return make_builtin("branin", Bounds({{-5.0, 10.0}, {0.0, 15.0}}), Direction::minimize, &branin,
                      std::move(opt));
}

Objective camelback_objective() {
  KnownOptimum opt;
  for (const auto& loc : constants::camelback_minimizers) opt.locations.push_back({loc[0], loc[1]});
  opt.value = constants::camelback_minimum;
  opt.tolerance = 1e-3;
  return make_builtin("camelback", Bounds({{-3.0, 3.0}, {-2.0, 2.0}}), Direction::minimize,
                      &camelback, std::move(opt));
}

Objective hartmann6_objective() {
  KnownOptimum opt;
  opt.locations.emplace_back(constants::hartmann6_maximizer.begin(),
                             constants::hartmann6_maximizer.end());
  opt.value = constants::hartmann6_maximum;
  opt.tolerance = 1e-4;
  return make_builtin("hartmann6", Bounds(std::vector<Interval>(6, Interval{0.0, 1.0})),
                      Direction::maximize, &hartmann6, std::move(opt));
}

std::vector<std::string> builtin_objective_names() { return {"branin", "camelback", "hartmann6"}; }

Objective builtin_objective(std::string_view name) {
  if (name == "branin") return branin_objective();
  if (name == "camelback") return camelback_objective();
  if (name == "hartmann6") return hartmann6_objective();
  throw InvalidArgument("unknown objective '" + std::string(name) +
                        "' (expected branin, camelback or hartmann6)");
}

Objective as_internal_max(const Objective& objective) {
  if (objective.direction() == Direction::maximize) return objective;
  auto inner = objective.factory_;
  Objective wrapped(objective.name_, objective.bounds_, Direction::maximize, [inner] {
    Evaluator e = inner();
    return Evaluator([e](std::span<const double> x) { return -e(x); });
  });
  if (objective.optimum_) {
    KnownOptimum opt = *objective.optimum_;
    opt.value = -opt.value;
    wrapped.optimum_ = std::move(opt);
  }
  wrapped.negated_ = true;
  return wrapped;
}

bool SelfTestResult::passed() const {
  return std::isfinite(value) && std::abs(value - expected) <= tolerance;
}

std::vector<SelfTestResult> self_test_objectives() {
  std::vector<SelfTestResult> results;
  for (const auto& name : builtin_objective_names()) {
    const Objective obj = builtin_objective(name);
    const auto& opt = *obj.known_optimum();
    for (const auto& loc : opt.locations) {
      results.push_back({name, loc, obj(loc), opt.value, opt.tolerance});
    }
  }
  return results;
}

}  // namespace ctxbo
