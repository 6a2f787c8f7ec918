#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "ctxbo/types.hpp"

using namespace ctxbo;

TEST(Bounds, RejectsEmptyOrInvertedIntervals) {
  EXPECT_THROW(Bounds({{1.0, 1.0}}), InvalidArgument);
  EXPECT_THROW(Bounds({{2.0, 1.0}}), InvalidArgument);
  EXPECT_THROW(Bounds({{0.0, std::numeric_limits<double>::infinity()}}), InvalidArgument);
  EXPECT_NO_THROW(Bounds({{-1.0, 1.0}, {0.0, 15.0}}));
}

TEST(Bounds, FromUnitMapsAffinely) {
  const Bounds b({{-5.0, 10.0}, {0.0, 15.0}});
  const std::vector<double> u{0.5, 0.2};
  const Vector x = b.from_unit(u);
  EXPECT_DOUBLE_EQ(x(0), 2.5);
  EXPECT_DOUBLE_EQ(x(1), 3.0);
  EXPECT_THROW((void)b.from_unit(std::vector<double>{0.5}), DimensionError);
}

TEST(Bounds, ContainsAndClip) {
  const Bounds b({{0.0, 1.0}, {-2.0, 2.0}});
  EXPECT_TRUE(b.contains(std::vector<double>{0.0, 2.0}));
  EXPECT_FALSE(b.contains(std::vector<double>{1.0001, 0.0}));
  Vector x(2);
  x << 3.0, -7.0;
  b.clip(x);
  EXPECT_EQ(x(0), 1.0);
  EXPECT_EQ(x(1), -2.0);
}

TEST(Bounds, DiagonalIsEuclideanLength) {
  const Bounds b({{0.0, 3.0}, {0.0, 4.0}});
  EXPECT_DOUBLE_EQ(b.diagonal(), 5.0);
}

TEST(Direction, ParsesAndCompares) {
  EXPECT_EQ(direction_from_string("minimize"), Direction::minimize);
  EXPECT_EQ(direction_from_string("maximize"), Direction::maximize);
  EXPECT_THROW((void)direction_from_string("sideways"), InvalidArgument);
  EXPECT_TRUE(better(Direction::minimize, 1.0, 2.0));
  EXPECT_FALSE(better(Direction::minimize, 2.0, 2.0));
  EXPECT_TRUE(better(Direction::maximize, 3.0, 2.0));
}
