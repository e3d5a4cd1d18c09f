#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "scribetok/error.hpp"

namespace scribetok {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct GridPoint {
  std::int32_t x = 0;
  std::int32_t y = 0;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
  friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

using Stroke = std::vector<Point>;
using IntStroke = std::vector<GridPoint>;

/// Continuous ink in input units, y growing upward.
struct RawInk {
  std::vector<Stroke> strokes;
  friend bool operator==(const RawInk&, const RawInk&) = default;
};

/// Grid-quantized ink; the domain of every codec.
struct IntegerInk {
  std::vector<IntStroke> strokes;
  friend bool operator==(const IntegerInk&, const IntegerInk&) = default;
};

struct QuantizationParams {
  double delta = 1.0;
};

namespace detail {

inline void require_delta(const QuantizationParams& q) {
  if (!(q.delta > 0.0) || !std::isfinite(q.delta)) {
    throw Error(ErrorCode::InvalidParams, "grid spacing must be a positive finite number");
  }
}

inline bool fits_int32(std::int64_t v) {
  return v >= std::numeric_limits<std::int32_t>::min() &&
         v <= std::numeric_limits<std::int32_t>::max();
}

inline std::int32_t saturate_int32(std::int64_t v) {
  if (v < std::numeric_limits<std::int32_t>::min()) return std::numeric_limits<std::int32_t>::min();
  if (v > std::numeric_limits<std::int32_t>::max()) return std::numeric_limits<std::int32_t>::max();
  return static_cast<std::int32_t>(v);
}

// std::round rounds halfway cases away from zero regardless of the
// floating-point environment's rounding mode.
inline std::int32_t round_to_grid(double c, double delta) {
  const double r = std::round(c / delta);
  if (!(r >= static_cast<double>(std::numeric_limits<std::int32_t>::min()) &&
        r <= static_cast<double>(std::numeric_limits<std::int32_t>::max()))) {
    throw Error(ErrorCode::Overflow, "quantized coordinate does not fit a 32-bit grid");
  }
  return static_cast<std::int32_t>(r);
}

/// Shortest decimal text that reads back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace detail

inline void validate(const RawInk& ink) {
  for (std::size_t s = 0; s < ink.strokes.size(); ++s) {
    const auto& stroke = ink.strokes[s];
    if (stroke.empty()) {
      throw Error(ErrorCode::InvalidInk, "stroke " + std::to_string(s) + " has no points");
    }
    for (const auto& p : stroke) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw Error(ErrorCode::InvalidInk,
                    "stroke " + std::to_string(s) + " has a non-finite coordinate");
      }
    }
  }
}

inline void validate(const IntegerInk& ink) {
  for (std::size_t s = 0; s < ink.strokes.size(); ++s) {
    if (ink.strokes[s].empty()) {
      throw Error(ErrorCode::InvalidInk, "stroke " + std::to_string(s) + " has no points");
    }
  }
}

inline std::size_t point_count(const IntegerInk& ink) {
  std::size_t n = 0;
  for (const auto& s : ink.strokes) n += s.size();
  return n;
}

inline std::size_t point_count(const RawInk& ink) {
  std::size_t n = 0;
  for (const auto& s : ink.strokes) n += s.size();
  return n;
}

/// Snaps every coordinate to the nearest multiple of delta (ties away from
/// zero). Duplicate consecutive points survive; stroke structure is kept.
inline IntegerInk quantize(const RawInk& ink, const QuantizationParams& q) {
  detail::require_delta(q);
  validate(ink);
  IntegerInk out;
  out.strokes.reserve(ink.strokes.size());
  for (const auto& stroke : ink.strokes) {
    IntStroke& dst = out.strokes.emplace_back();
    dst.reserve(stroke.size());
    for (const auto& p : stroke) {
      dst.push_back({detail::round_to_grid(p.x, q.delta), detail::round_to_grid(p.y, q.delta)});
    }
  }
  return out;
}

inline RawInk dequantize(const IntegerInk& ink, const QuantizationParams& q) {
  detail::require_delta(q);
  RawInk out;
  out.strokes.reserve(ink.strokes.size());
  for (const auto& stroke : ink.strokes) {
    Stroke& dst = out.strokes.emplace_back();
    dst.reserve(stroke.size());
    for (const auto& p : stroke) {
      dst.push_back({static_cast<double>(p.x) * q.delta, static_cast<double>(p.y) * q.delta});
    }
  }
  return out;
}

}  // namespace scribetok
