#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string_view>
#include <vector>

#include "scribetok/error.hpp"
#include "scribetok/ink.hpp"

namespace scribetok {

/// Freeman chain code, counter-clockwise from east.
enum class Direction : std::uint8_t { E = 0, NE, N, NW, W, SW, S, SE };

inline constexpr std::array<Direction, 8> kAllDirections = {
    Direction::E, Direction::NE, Direction::N, Direction::NW,
    Direction::W, Direction::SW, Direction::S, Direction::SE};

struct Displacement {
  int dx;
  int dy;
};

constexpr Displacement displacement(Direction d) {
  constexpr std::array<Displacement, 8> table = {
      {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
  return table[static_cast<std::size_t>(d)];
}

constexpr std::string_view direction_name(Direction d) {
  constexpr std::array<std::string_view, 8> names = {"E", "NE", "N", "NW", "W", "SW", "S", "SE"};
  return names[static_cast<std::size_t>(d)];
}

/// Inverse of displacement(); nullopt for (0,0) or non-unit steps.
constexpr std::optional<Direction> direction_of(int dx, int dy) {
  if (dx < -1 || dx > 1 || dy < -1 || dy > 1 || (dx == 0 && dy == 0)) return std::nullopt;
  // Indexed by (dy + 1) * 3 + (dx + 1); the center cell is unreachable.
  constexpr std::array<Direction, 9> table = {Direction::SW, Direction::S, Direction::SE,
                                              Direction::W,  Direction::E, Direction::E,
                                              Direction::NW, Direction::N, Direction::NE};
  return table[static_cast<std::size_t>((dy + 1) * 3 + (dx + 1))];
}

using DirectionSeq = std::vector<Direction>;

inline GridPoint step(GridPoint p, Direction d) {
  const Displacement u = displacement(d);
  const std::int64_t x = static_cast<std::int64_t>(p.x) + u.dx;
  const std::int64_t y = static_cast<std::int64_t>(p.y) + u.dy;
  if (!detail::fits_int32(x) || !detail::fits_int32(y)) {
    throw Error(ErrorCode::Overflow, "grid step leaves the 32-bit range");
  }
  return {static_cast<std::int32_t>(x), static_cast<std::int32_t>(y)};
}

/// Walks the Bresenham rasterization of p -> q and hands each unit step to
/// `sink`. The driving axis is the longer extent (x on ties); the error term
/// starts at 2*minor - major and a zero error takes the straight step.
template <typename Sink>
inline void for_each_bresenham_step(GridPoint p, GridPoint q, Sink&& sink) {
  const std::int64_t dx = static_cast<std::int64_t>(q.x) - p.x;
  const std::int64_t dy = static_cast<std::int64_t>(q.y) - p.y;
  const std::int64_t a = dx < 0 ? -dx : dx;
  const std::int64_t b = dy < 0 ? -dy : dy;
  const int sx = dx < 0 ? -1 : (dx > 0 ? 1 : 0);
  const int sy = dy < 0 ? -1 : (dy > 0 ? 1 : 0);

  const Direction diagonal = direction_of(sx, sy).value_or(Direction::E);
  if (a >= b) {
    if (a == 0) return;
    const Direction straight = *direction_of(sx, 0);
    std::int64_t err = 2 * b - a;
    for (std::int64_t i = 0; i < a; ++i) {
      if (err > 0) {
        sink(diagonal);
        err += 2 * (b - a);
      } else {
        sink(straight);
        err += 2 * b;
      }
    }
  } else {
    const Direction straight = *direction_of(0, sy);
    std::int64_t err = 2 * a - b;
    for (std::int64_t i = 0; i < b; ++i) {
      if (err > 0) {
        sink(diagonal);
        err += 2 * (a - b);
      } else {
        sink(straight);
        err += 2 * a;
      }
    }
  }
}

/// Bresenham Decomposition: the chain code of the rasterized segment p -> q.
/// Exactly max(|dx|, |dy|) steps; empty when p == q.
inline DirectionSeq bresenham_decompose(GridPoint p, GridPoint q) {
  DirectionSeq out;
  const std::int64_t dx = static_cast<std::int64_t>(q.x) - p.x;
  const std::int64_t dy = static_cast<std::int64_t>(q.y) - p.y;
  out.reserve(static_cast<std::size_t>(std::max(std::llabs(dx), std::llabs(dy))));
  for_each_bresenham_step(p, q, [&](Direction d) { out.push_back(d); });
  return out;
}

/// The cells visited from p to q inclusive.
inline std::vector<GridPoint> rasterize_segment(GridPoint p, GridPoint q) {
  std::vector<GridPoint> cells{p};
  for_each_bresenham_step(p, q, [&](Direction d) { cells.push_back(step(cells.back(), d)); });
  return cells;
}

}  // namespace scribetok
