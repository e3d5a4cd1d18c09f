#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "scribetok/chain.hpp"

namespace scribetok {
namespace {

using D = Direction;

std::vector<GridPoint> walk(GridPoint p, const DirectionSeq& seq) {
  std::vector<GridPoint> cells{p};
  for (auto d : seq) cells.push_back(step(cells.back(), d));
  return cells;
}

// Closed-form oracle: along the driving axis, step i lands the minor
// coordinate on b*i/a rounded to nearest with exact halves rounded toward the
// start, i.e. ceil((2*b*i - a) / (2*a)).
std::vector<GridPoint> closed_form_cells(GridPoint p, GridPoint q) {
  const std::int64_t dx = q.x - p.x;
  const std::int64_t dy = q.y - p.y;
  const std::int64_t a = std::llabs(dx);
  const std::int64_t b = std::llabs(dy);
  const std::int64_t sx = dx < 0 ? -1 : 1;
  const std::int64_t sy = dy < 0 ? -1 : 1;
  const auto ceil_div = [](std::int64_t n, std::int64_t d) {
    return n >= 0 ? (n + d - 1) / d : -((-n) / d);
  };
  std::vector<GridPoint> cells{p};
  const std::int64_t major = std::max(a, b);
  const std::int64_t minor = std::min(a, b);
  for (std::int64_t i = 1; i <= major; ++i) {
    const std::int64_t m = ceil_div(2 * minor * i - major, 2 * major);
    if (a >= b) {
      cells.push_back({static_cast<std::int32_t>(p.x + sx * i), static_cast<std::int32_t>(p.y + sy * m)});
    } else {
      cells.push_back({static_cast<std::int32_t>(p.x + sx * m), static_cast<std::int32_t>(p.y + sy * i)});
    }
  }
  return cells;
}

TEST(Direction, DisplacementsAreDistinctUnitSteps) {
  for (std::size_t i = 0; i < kAllDirections.size(); ++i) {
    const auto u = displacement(kAllDirections[i]);
    EXPECT_TRUE(u.dx >= -1 && u.dx <= 1 && u.dy >= -1 && u.dy <= 1);
    EXPECT_FALSE(u.dx == 0 && u.dy == 0);
    EXPECT_EQ(direction_of(u.dx, u.dy), kAllDirections[i]);
    for (std::size_t j = i + 1; j < kAllDirections.size(); ++j) {
      const auto v = displacement(kAllDirections[j]);
      EXPECT_FALSE(u.dx == v.dx && u.dy == v.dy);
    }
  }
  EXPECT_FALSE(direction_of(0, 0).has_value());
  EXPECT_FALSE(direction_of(2, 0).has_value());
}

TEST(Step, MovesOneCell) {
  EXPECT_EQ(step({0, 0}, D::NE), (GridPoint{1, 1}));
  EXPECT_EQ(step({5, -2}, D::W), (GridPoint{4, -2}));
}

TEST(Step, OverflowThrows) {
  try {
    step({std::numeric_limits<std::int32_t>::max(), 0}, D::E);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Overflow);
  }
}

TEST(Bresenham, FigureTwoSequence) {
  const DirectionSeq expected = {D::E, D::SE, D::E, D::SE, D::E, D::E, D::SE, D::E, D::SE, D::E};
  EXPECT_EQ(bresenham_decompose({1, 5}, {11, 1}), expected);
}

TEST(Bresenham, SmallCases) {
  EXPECT_TRUE(bresenham_decompose({3, 3}, {3, 3}).empty());
  EXPECT_EQ(bresenham_decompose({2, 1}, {4, -1}), (DirectionSeq{D::SE, D::SE}));
  EXPECT_EQ(bresenham_decompose({0, 0}, {0, -3}), (DirectionSeq{D::S, D::S, D::S}));
  EXPECT_EQ(bresenham_decompose({0, 0}, {1, 0}), (DirectionSeq{D::E}));
  EXPECT_EQ(bresenham_decompose({1, 0}, {2, 1}), (DirectionSeq{D::NE}));
}

TEST(Bresenham, TieTakesStraightStep) {
  // (0,0)->(2,1): D starts at 0, so the first step is straight.
  EXPECT_EQ(bresenham_decompose({0, 0}, {2, 1}), (DirectionSeq{D::E, D::NE}));
  EXPECT_EQ(bresenham_decompose({0, 0}, {-1, -2}), (DirectionSeq{D::S, D::SW}));
}

TEST(Bresenham, MatchesClosedFormExhaustively) {
  for (int dx = -12; dx <= 12; ++dx) {
    for (int dy = -12; dy <= 12; ++dy) {
      const GridPoint p{3, -7};
      const GridPoint q{p.x + dx, p.y + dy};
      const auto seq = bresenham_decompose(p, q);
      ASSERT_EQ(seq.size(), static_cast<std::size_t>(std::max(std::abs(dx), std::abs(dy))));
      EXPECT_EQ(walk(p, seq), closed_form_cells(p, q)) << "dx=" << dx << " dy=" << dy;
      EXPECT_EQ(rasterize_segment(p, q), closed_form_cells(p, q));
    }
  }
}

TEST(Bresenham, DiagonalsUseOnlyDiagonalSteps) {
  for (int k = 1; k <= 20; ++k) {
    for (auto [sx, sy] : {std::pair{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) {
      const auto seq = bresenham_decompose({0, 0}, {sx * k, sy * k});
      const auto diag = *direction_of(sx, sy);
      for (auto d : seq) EXPECT_EQ(d, diag);
    }
  }
}

TEST(Bresenham, LargeExtentsDoNotOverflow) {
  const GridPoint p{std::numeric_limits<std::int32_t>::min(), 0};
  const GridPoint q{std::numeric_limits<std::int32_t>::min() + 5, 3};
  const auto seq = bresenham_decompose(p, q);
  EXPECT_EQ(seq.size(), 5u);
  EXPECT_EQ(walk(p, seq).back(), q);
}

TEST(Bresenham, CommensurateSubdivisionProperty) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> comp(-9, 9);
  std::uniform_int_distribution<int> pos(-50, 50);
  for (int trial = 0; trial < 500; ++trial) {
    const int vx = comp(rng);
    const int vy = comp(rng);
    if (vx == 0 && vy == 0) continue;
    const int n = std::uniform_int_distribution<int>(2, 8)(rng);
    const int j = std::uniform_int_distribution<int>(1, n - 1)(rng);
    const GridPoint p{pos(rng), pos(rng)};
    const GridPoint m{p.x + j * vx, p.y + j * vy};
    const GridPoint q{p.x + n * vx, p.y + n * vy};
    auto joined = bresenham_decompose(p, m);
    const auto tail = bresenham_decompose(m, q);
    joined.insert(joined.end(), tail.begin(), tail.end());
    EXPECT_EQ(joined, bresenham_decompose(p, q)) << "v=(" << vx << "," << vy << ") n=" << n << " j=" << j;
  }
}

}  // namespace
}  // namespace scribetok
