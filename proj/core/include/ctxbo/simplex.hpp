#pragma once

#include <functional>

#include "ctxbo/types.hpp"

namespace ctxbo {

struct SimplexOptions {
  int max_evaluations = 500;
  /// Stop when the spread of vertex values falls below this.
  double value_tolerance = 1e-10;
  /// Stop when every vertex is within this distance (per coordinate) of the best.
  double point_tolerance = 1e-10;
  /// Initial edge length as a fraction of each coordinate's box width.
  double initial_step = 0.1;
};

struct SimplexResult {
  Vector x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead minimization inside the box [lower, upper].
///
/// Trial points are projected onto the box before evaluation, so every point
/// handed to `f` is feasible. Non-finite values are treated as +inf.
[[nodiscard]] SimplexResult minimize_simplex(const std::function<double(const Vector&)>& f,
                                             const Vector& start, const Vector& lower,
                                             const Vector& upper, const SimplexOptions& options = {});

}  // namespace ctxbo
