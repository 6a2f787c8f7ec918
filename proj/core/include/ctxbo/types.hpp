#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace ctxbo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Closed interval [lower, upper] for one input dimension.
struct Interval {
  double lower = 0.0;
  double upper = 1.0;

  [[nodiscard]] double width() const { return upper - lower; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-aligned box. Every dimension must satisfy lower < upper.
class Bounds {
 public:
  Bounds() = default;
  explicit Bounds(std::vector<Interval> intervals);

  [[nodiscard]] std::size_t dimension() const { return intervals_.size(); }
  [[nodiscard]] const Interval& operator[](std::size_t i) const { return intervals_[i]; }
  [[nodiscard]] const std::vector<Interval>& intervals() const { return intervals_; }

  [[nodiscard]] bool contains(std::span<const double> x) const;
  /// Length of the box diagonal.
  [[nodiscard]] double diagonal() const;
  /// Maps a point of the unit cube affinely onto the box.
  [[nodiscard]] Vector from_unit(std::span<const double> u) const;
  /// Clamps each coordinate of x into the box, in place.
  void clip(Eigen::Ref<Vector> x) const;

  friend bool operator==(const Bounds&, const Bounds&) = default;

 private:
  std::vector<Interval> intervals_;
};

enum class Direction { minimize, maximize };

[[nodiscard]] std::string_view to_string(Direction d);
[[nodiscard]] Direction direction_from_string(std::string_view s);

/// True when `a` is strictly better than `b` under `d`.
[[nodiscard]] inline bool better(Direction d, double a, double b) {
  return d == Direction::minimize ? a < b : a > b;
}

inline std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Error hierarchy. Everything thrown by the library derives from Error.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace ctxbo
