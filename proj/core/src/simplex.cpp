#include "ctxbo/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace ctxbo {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

SimplexResult minimize_simplex(const std::function<double(const Vector&)>& f, const Vector& start,
                               const Vector& lower, const Vector& upper,
                               const SimplexOptions& options) {
  const Eigen::Index n = start.size();
  if (lower.size() != n || upper.size() != n) {
    throw DimensionError("minimize_simplex: bound dimensions do not match start point");
  }

  int evaluations = 0;
  auto project = [&](Vector x) {
    return x.cwiseMax(lower).cwiseMin(upper).eval();
  };
  auto evaluate = [&](const Vector& x) {
    ++evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Vector> vertices;
  vertices.reserve(static_cast<std::size_t>(n) + 1);
  vertices.push_back(project(start));
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector v = vertices.front();
    const double width = upper(i) - lower(i);
    double step = options.initial_step * (width > 0.0 ? width : 1.0);
    if (v(i) + step > upper(i)) step = -step;
    v(i) += step;
    vertices.push_back(project(v));
  }
  std::vector<double> values;
  values.reserve(vertices.size());
  for (const auto& v : vertices) values.push_back(evaluate(v));

  std::vector<std::size_t> order(vertices.size());
  bool converged = false;

  while (evaluations < options.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];

    double spread = values[worst] - values[best];
    if (!std::isfinite(spread)) spread = std::numeric_limits<double>::infinity();
    double size = 0.0;
    for (const auto& v : vertices) {
      size = std::max(size, (v - vertices[best]).cwiseAbs().maxCoeff());
    }
    if (spread <= options.value_tolerance && size <= options.point_tolerance) {
      converged = true;
      break;
    }

    Vector centroid = Vector::Zero(n);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) centroid += vertices[order[i]];
    centroid /= static_cast<double>(n);

    const Vector reflected = project(centroid + kReflect * (centroid - vertices[worst]));
    const double f_reflected = evaluate(reflected);

    if (f_reflected < values[best]) {
      const Vector expanded = project(centroid + kExpand * (reflected - centroid));
      const double f_expanded = evaluate(expanded);
      if (f_expanded < f_reflected) {
        vertices[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        vertices[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      vertices[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }

    const bool outside = f_reflected < values[worst];
    const Vector contracted =
        outside ? project(centroid + kContract * (reflected - centroid))
                : project(centroid + kContract * (vertices[worst] - centroid));
    const double f_contracted = evaluate(contracted);
    if (f_contracted < (outside ? f_reflected : values[worst])) {
      vertices[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }

    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (i == best) continue;
      vertices[i] = project(vertices[best] + kShrink * (vertices[i] - vertices[best]));
      values[i] = evaluate(vertices[i]);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best_index = static_cast<std::size_t>(best_it - values.begin());
  return SimplexResult{vertices[best_index], *best_it, evaluations, converged};
}

}  // namespace ctxbo
