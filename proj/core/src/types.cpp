#include "ctxbo/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ctxbo {

Bounds::Bounds(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& iv = intervals_[i];
    if (!std::isfinite(iv.lower) || !std::isfinite(iv.upper) || !(iv.lower < iv.upper)) {
      throw InvalidArgument("bounds: dimension " + std::to_string(i) +
                            " requires finite lower < upper");
    }
  }
}

bool Bounds::contains(std::span<const double> x) const {
  if (x.size() != intervals_.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= intervals_[i].lower && x[i] <= intervals_[i].upper)) return false;
  }
  return true;
}

double Bounds::diagonal() const {
  double sum = 0.0;
  for (const auto& iv : intervals_) sum += iv.width() * iv.width();
  return std::sqrt(sum);
}

Vector Bounds::from_unit(std::span<const double> u) const {
  if (u.size() != intervals_.size()) {
    throw DimensionError("bounds: unit point has wrong dimension");
  }
  Vector x(static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto& iv = intervals_[i];
    // Keep the image inside the closed box even after rounding.
    x(static_cast<Eigen::Index>(i)) = std::clamp(iv.lower + u[i] * iv.width(), iv.lower, iv.upper);
  }
  return x;
}

void Bounds::clip(Eigen::Ref<Vector> x) const {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    auto& v = x(static_cast<Eigen::Index>(i));
    v = std::clamp(v, intervals_[i].lower, intervals_[i].upper);
  }
}

std::string_view to_string(Direction d) {
  return d == Direction::minimize ? "minimize" : "maximize";
}

Direction direction_from_string(std::string_view s) {
  if (s == "minimize" || s == "min") return Direction::minimize;
  if (s == "maximize" || s == "max") return Direction::maximize;
  throw InvalidArgument("unknown direction '" + std::string(s) + "'");
}

}  // namespace ctxbo
