#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ctxbo {

/// Gray-code Sobol sequence over [0,1)^d using Joe-Kuo direction numbers.
///
/// The all-zeros point at index 0 is never emitted: the first call to next()
/// returns the point at index 1. Two streams of equal dimension produce
/// bit-identical output.
class SobolStream {
 public:
  static constexpr std::size_t max_dimension = 21;
  static constexpr int bits = 32;

  explicit SobolStream(std::size_t dimension);

  /// Next point of the sequence.
  std::vector<double> next();
  /// Writes the next point into `out` (size must equal dimension()).
  void next_into(double* out);
  /// Advances past `count` points without producing them.
  void skip(std::uint64_t count);

  [[nodiscard]] std::size_t dimension() const { return dimension_; }
  /// Index of the most recently emitted point (0 before the first call).
  [[nodiscard]] std::uint64_t index() const { return index_; }

 private:
  void advance();

  std::size_t dimension_;
  std::uint64_t index_ = 0;
  std::vector<std::array<std::uint32_t, bits>> directions_;
  std::vector<std::uint32_t> state_;
};

}  // namespace ctxbo
