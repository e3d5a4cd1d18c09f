#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "scribetok/ink.hpp"
#include "support/synth.hpp"

namespace scribetok {
namespace {

TEST(Quantize, ExactMultiples) {
  const RawInk ink{{{{0, 0}, {8, 0}}}};
  const IntegerInk expected{{{{0, 0}, {1, 0}}}};
  EXPECT_EQ(quantize(ink, {8.0}), expected);
}

TEST(Quantize, NegativeRoundsToNearest) {
  // -4.1 / 8 = -0.5125 -> -1; 3.9 / 8 = 0.4875 -> 0.
  const RawInk ink{{{{3.9, -4.1}}}};
  const IntegerInk expected{{{{0, -1}}}};
  EXPECT_EQ(quantize(ink, {8.0}), expected);
}

TEST(Quantize, TiesRoundAwayFromZero) {
  const RawInk ink{{{{4, -4}, {12, -12}, {-20, 20}}}};
  const IntegerInk expected{{{{1, -1}, {2, -2}, {-3, 3}}}};
  EXPECT_EQ(quantize(ink, {8.0}), expected);
}

TEST(Quantize, UnitDeltaIsIdentityOnIntegerInk) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const IntegerInk grid = testing::random_integer_ink(rng);
    const RawInk raw = dequantize(grid, {1.0});
    EXPECT_EQ(quantize(raw, {1.0}), grid);
    EXPECT_EQ(quantize(dequantize(quantize(raw, {1.0}), {1.0}), {1.0}), grid);
  }
}

TEST(Quantize, KeepsDuplicatesAndStructure) {
  const RawInk ink{{{{0.1, 0.1}, {0.2, 0.2}, {9, 9}}, {{1, 1}}}};
  const IntegerInk q = quantize(ink, {8.0});
  ASSERT_EQ(q.strokes.size(), 2u);
  EXPECT_EQ(q.strokes[0].size(), 3u);
  EXPECT_EQ(q.strokes[0][0], q.strokes[0][1]);
  EXPECT_EQ(q.strokes[1].size(), 1u);
}

TEST(Quantize, RejectsNonFinite) {
  const RawInk ink{{{{0, std::numeric_limits<double>::quiet_NaN()}}}};
  try {
    quantize(ink, {1.0});
    FAIL() << "expected InvalidInk";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInk);
  }
}

TEST(Quantize, RejectsOverflow) {
  const RawInk ink{{{{1e12, 0}}}};
  try {
    quantize(ink, {1.0});
    FAIL() << "expected Overflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Overflow);
  }
}

TEST(Quantize, RejectsBadDeltaAndEmptyStroke) {
  EXPECT_THROW(quantize(RawInk{{{{0, 0}}}}, {0.0}), Error);
  EXPECT_THROW(quantize(RawInk{{{{0, 0}}}}, {-1.0}), Error);
  EXPECT_THROW(quantize(RawInk{{Stroke{}}}, {1.0}), Error);
}

TEST(Dequantize, Scales) {
  EXPECT_EQ(dequantize(IntegerInk{{{{1, 0}}}}, {8.0}), (RawInk{{{{8, 0}}}}));
  EXPECT_EQ(dequantize(IntegerInk{{{{2, 1}, {4, -1}}}}, {8.0}), (RawInk{{{{16, 8}, {32, -8}}}}));
  EXPECT_EQ(dequantize(IntegerInk{{{{2, 1}, {4, -1}}}}, {1.0}), (RawInk{{{{2, 1}, {4, -1}}}}));
}

TEST(Dequantize, QuantizeInvertsIt) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> delta(0.01, 100.0);
  for (int trial = 0; trial < 500; ++trial) {
    const IntegerInk grid = testing::random_integer_ink(rng, 4, 6, 100000);
    const QuantizationParams q{delta(rng)};
    const RawInk raw = dequantize(grid, q);
    EXPECT_EQ(quantize(raw, q), grid);
    ASSERT_EQ(raw.strokes.size(), grid.strokes.size());
    for (std::size_t s = 0; s < raw.strokes.size(); ++s) {
      EXPECT_EQ(raw.strokes[s].size(), grid.strokes[s].size());
    }
  }
}

}  // namespace
}  // namespace scribetok
