#include "ctxbo/sobol.hpp"

#include <bit>
#include <string>

#include "ctxbo/types.hpp"

namespace ctxbo {

namespace {

// Joe & Kuo (new-joe-kuo-6.21201), dimensions 2..21: degree s, polynomial
// coefficients a, initial direction numbers m_1..m_s.
struct DirectionSeed {
  unsigned degree;
  std::uint32_t poly;
  std::array<std::uint32_t, 8> m;
};

constexpr std::array<DirectionSeed, SobolStream::max_dimension - 1> kSeeds{{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
    {6, 25, {1, 1, 5, 5, 19, 61}},
    {7, 1, {1, 3, 7, 11, 23, 15, 103}},
    {7, 4, {1, 3, 7, 13, 13, 15, 69}},
}};

constexpr double kScale = 1.0 / 4294967296.0;  // 2^-32

}  // namespace

SobolStream::SobolStream(std::size_t dimension)
    : dimension_(dimension), directions_(dimension), state_(dimension, 0u) {
  if (dimension == 0 || dimension > max_dimension) {
    throw InvalidArgument("sobol: dimension " + std::to_string(dimension) +
                          " outside supported range 1.." + std::to_string(max_dimension));
  }
  for (int i = 0; i < bits; ++i) directions_[0][i] = 1u << (bits - 1 - i);

  for (std::size_t k = 1; k < dimension; ++k) {
    const DirectionSeed& seed = kSeeds[k - 1];
    auto& v = directions_[k];
    const unsigned s = seed.degree;
    for (unsigned i = 0; i < s && i < static_cast<unsigned>(bits); ++i) {
      v[i] = seed.m[i] << (bits - 1 - i);
    }
    for (unsigned i = s; i < static_cast<unsigned>(bits); ++i) {
      std::uint32_t value = v[i - s] ^ (v[i - s] >> s);
      for (unsigned j = 1; j < s; ++j) {
        if ((seed.poly >> (s - 1 - j)) & 1u) value ^= v[i - j];
      }
      v[i] = value;
    }
  }
}

void SobolStream::advance() {
  // Gray-code update: flip the direction number of the lowest zero bit of
  // the previous index.
  const int c = std::countr_one(index_);
  if (c >= bits) throw Error("sobol: sequence exhausted");
  for (std::size_t k = 0; k < dimension_; ++k) state_[k] ^= directions_[k][c];
  ++index_;
}

void SobolStream::next_into(double* out) {
  advance();
  for (std::size_t k = 0; k < dimension_; ++k) out[k] = static_cast<double>(state_[k]) * kScale;
}

std::vector<double> SobolStream::next() {
  std::vector<double> p(dimension_);
  next_into(p.data());
  return p;
}

void SobolStream::skip(std::uint64_t count) {
  for (std::uint64_t i = 0; i < count; ++i) advance();
}

}  // namespace ctxbo
