#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scribetok/error.hpp"
#include "scribetok/ink.hpp"

// Baseline representations: Point-3 and Point-5 offset vectors, absolute and
// relative coordinate tokens, and decimal text tokens. Every decoder is total.

namespace scribetok {

struct Offset {
  std::int64_t dx = 0;
  std::int64_t dy = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

struct Point3 {
  std::int64_t dx = 0;
  std::int64_t dy = 0;
  std::uint8_t pen_up = 0;
  friend bool operator==(const Point3&, const Point3&) = default;
};

struct Point5 {
  std::int64_t dx = 0;
  std::int64_t dy = 0;
  std::uint8_t p1 = 0;  // drawing
  std::uint8_t p2 = 0;  // pen in air
  std::uint8_t p3 = 0;  // end of sequence
  friend bool operator==(const Point5&, const Point5&) = default;
};

using VectorSeq3 = std::vector<Point3>;
using VectorSeq5 = std::vector<Point5>;

struct CoordToken {
  enum class Kind : std::uint8_t { Coord, Up, Unknown };
  Kind kind = Kind::Coord;
  std::int64_t x = 0;
  std::int64_t y = 0;

  static constexpr CoordToken coord(std::int64_t x, std::int64_t y) { return {Kind::Coord, x, y}; }
  static constexpr CoordToken up() { return {Kind::Up, 0, 0}; }
  static constexpr CoordToken unknown() { return {Kind::Unknown, 0, 0}; }
  friend bool operator==(const CoordToken&, const CoordToken&) = default;
};

using CoordTokenSeq = std::vector<CoordToken>;

/// TextTokens alphabet: ten digits, minus, space, UP.
enum class TextToken : std::uint8_t {
  D0 = 0, D1, D2, D3, D4, D5, D6, D7, D8, D9,
  Minus = 10,
  Space = 11,
  Up = 12,
};

inline constexpr int kTextAlphabetSize = 13;
using TextTokenSeq = std::vector<TextToken>;

namespace detail {

inline GridPoint first_point(const IntegerInk& ink, const char* codec) {
  validate(ink);
  if (ink.strokes.empty()) {
    throw Error(ErrorCode::InvalidInk, std::string(codec) + " needs at least one point");
  }
  return ink.strokes.front().front();
}

inline Offset offset_between(GridPoint from, GridPoint to) {
  return {static_cast<std::int64_t>(to.x) - from.x, static_cast<std::int64_t>(to.y) - from.y};
}

inline GridPoint translate(GridPoint p, std::int64_t dx, std::int64_t dy) {
  // Offsets can come from untrusted decoders; clamp before adding.
  const auto clamp = [](std::int64_t v) {
    constexpr std::int64_t lim = std::int64_t{1} << 40;
    return v < -lim ? -lim : (v > lim ? lim : v);
  };
  return {saturate_int32(static_cast<std::int64_t>(p.x) + clamp(dx)),
          saturate_int32(static_cast<std::int64_t>(p.y) + clamp(dy))};
}

/// Calls visit(offset, within_stroke, ends_stroke) for every transition of the
/// flattened point sequence; the first point is the origin.
template <typename Visit>
void for_each_transition(const IntegerInk& ink, Visit&& visit) {
  bool have_prev = false;
  GridPoint prev{};
  for (const auto& stroke : ink.strokes) {
    for (std::size_t i = 0; i < stroke.size(); ++i) {
      if (have_prev) visit(offset_between(prev, stroke[i]), i > 0, i + 1 == stroke.size());
      prev = stroke[i];
      have_prev = true;
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Point-3

inline VectorSeq3 point3_encode(const IntegerInk& ink) {
  detail::first_point(ink, "Point-3");
  VectorSeq3 out;
  detail::for_each_transition(ink, [&](Offset o, bool, bool ends) {
    out.push_back({o.dx, o.dy, static_cast<std::uint8_t>(ends ? 1 : 0)});
  });
  return out;
}

/// The origin is always a drawn point; an entry with pen_up set closes the
/// current stroke and the next entry's destination opens a new one.
inline IntegerInk point3_decode(std::span<const Point3> seq, GridPoint origin = {}) {
  IntegerInk ink;
  IntStroke open{origin};
  GridPoint pos = origin;
  bool closed = false;
  for (const auto& v : seq) {
    pos = detail::translate(pos, v.dx, v.dy);
    if (closed) {
      open.assign(1, pos);
      closed = false;
    } else {
      open.push_back(pos);
    }
    if (v.pen_up) {
      ink.strokes.push_back(std::move(open));
      open.clear();
      closed = true;
    }
  }
  if (!closed) ink.strokes.push_back(std::move(open));
  return ink;
}

// ---------------------------------------------------------------------------
// Point-5

/// Flags mark the kind of transition: p1 drawing, p2 pen in air, and p3 on
/// the last transition of the ink whatever its kind.
inline VectorSeq5 point5_encode(const IntegerInk& ink) {
  detail::first_point(ink, "Point-5");
  VectorSeq5 out;
  detail::for_each_transition(ink, [&](Offset o, bool within, bool) {
    out.push_back({o.dx, o.dy, static_cast<std::uint8_t>(within ? 1 : 0),
                   static_cast<std::uint8_t>(within ? 0 : 1), 0});
  });
  if (!out.empty()) {
    out.back().p1 = 0;
    out.back().p2 = 0;
    out.back().p3 = 1;
  }
  return out;
}

/// p2 starts a new stroke at its destination, p1 and p3 draw to theirs, and
/// decoding stops after the first p3. Entries with no flag set draw; with
/// several set, p3 wins over p2 over p1. A final single-point stroke cannot be
/// told apart from a drawn last segment, so such inks decode with that point
/// attached to the previous stroke.
inline IntegerInk point5_decode(std::span<const Point5> seq, GridPoint origin = {}) {
  IntegerInk ink;
  IntStroke open{origin};
  GridPoint pos = origin;
  for (const auto& v : seq) {
    pos = detail::translate(pos, v.dx, v.dy);
    if (!v.p3 && v.p2) {
      ink.strokes.push_back(std::move(open));
      open.assign(1, pos);
    } else {
      open.push_back(pos);
    }
    if (v.p3) break;
  }
  ink.strokes.push_back(std::move(open));
  return ink;
}

// ---------------------------------------------------------------------------
// AbsTokens

inline CoordTokenSeq abs_encode(const IntegerInk& ink) {
  validate(ink);
  CoordTokenSeq out;
  for (const auto& stroke : ink.strokes) {
    for (const auto& p : stroke) out.push_back(CoordToken::coord(p.x, p.y));
    out.push_back(CoordToken::up());
  }
  return out;
}

/// UNKNOWN points are dropped; UP closes the stroke when it has points.
inline IntegerInk abs_decode(std::span<const CoordToken> seq) {
  IntegerInk ink;
  IntStroke open;
  for (const auto& t : seq) {
    switch (t.kind) {
      case CoordToken::Kind::Coord:
        open.push_back({detail::saturate_int32(t.x), detail::saturate_int32(t.y)});
        break;
      case CoordToken::Kind::Up:
        if (!open.empty()) {
          ink.strokes.push_back(std::move(open));
          open.clear();
        }
        break;
      case CoordToken::Kind::Unknown:
        break;
    }
  }
  if (!open.empty()) ink.strokes.push_back(std::move(open));
  return ink;
}

// ---------------------------------------------------------------------------
// RelTokens

/// One token per transition, UP after each stroke's last point. The pen-in-air
/// offset into a stroke is emitted without any pen-down marker.
inline CoordTokenSeq rel_encode(const IntegerInk& ink) {
  detail::first_point(ink, "RelTokens");
  CoordTokenSeq out;
  for (std::size_t j = 0; j < ink.strokes.size(); ++j) {
    const auto& stroke = ink.strokes[j];
    for (std::size_t i = 0; i < stroke.size(); ++i) {
      if (j == 0 && i == 0) continue;
      const GridPoint prev = i > 0 ? stroke[i - 1] : ink.strokes[j - 1].back();
      const Offset o = detail::offset_between(prev, stroke[i]);
      out.push_back(CoordToken::coord(o.dx, o.dy));
    }
    out.push_back(CoordToken::up());
  }
  return out;
}

/// UNKNOWN is a zero displacement: it still produces a point.
inline IntegerInk rel_decode(std::span<const CoordToken> seq, GridPoint origin = {}) {
  IntegerInk ink;
  IntStroke open{origin};
  GridPoint pos = origin;
  bool lifted = false;
  for (const auto& t : seq) {
    if (t.kind == CoordToken::Kind::Up) {
      if (!lifted) {
        ink.strokes.push_back(std::move(open));
        open.clear();
        lifted = true;
      }
      continue;
    }
    if (t.kind == CoordToken::Kind::Coord) pos = detail::translate(pos, t.x, t.y);
    if (lifted) {
      open.assign(1, pos);
      lifted = false;
    } else {
      open.push_back(pos);
    }
  }
  if (!lifted) ink.strokes.push_back(std::move(open));
  return ink;
}

/// Replaces coordinate tokens rejected by `known(x, y)` with UNKNOWN.
template <typename Known>
CoordTokenSeq mask_unknown(CoordTokenSeq seq, Known&& known) {
  for (auto& t : seq) {
    if (t.kind == CoordToken::Kind::Coord && !known(t.x, t.y)) t = CoordToken::unknown();
  }
  return seq;
}

inline std::string coord_token_name(const CoordToken& t) {
  switch (t.kind) {
    case CoordToken::Kind::Up: return "UP";
    case CoordToken::Kind::Unknown: return "UNKNOWN";
    case CoordToken::Kind::Coord: break;
  }
  return "(" + std::to_string(t.x) + "," + std::to_string(t.y) + ")";
}

/// Parses "(x,y)", "UP" or "UNKNOWN".
inline std::optional<CoordToken> parse_coord_token(std::string_view s) {
  if (s == "UP") return CoordToken::up();
  if (s == "UNKNOWN") return CoordToken::unknown();
  if (s.size() < 5 || s.front() != '(' || s.back() != ')') return std::nullopt;
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  std::int64_t x = 0;
  std::int64_t y = 0;
  const auto xs = s.substr(1, comma - 1);
  const auto ys = s.substr(comma + 1, s.size() - comma - 2);
  auto rx = std::from_chars(xs.data(), xs.data() + xs.size(), x);
  auto ry = std::from_chars(ys.data(), ys.data() + ys.size(), y);
  if (rx.ec != std::errc{} || rx.ptr != xs.data() + xs.size()) return std::nullopt;
  if (ry.ec != std::errc{} || ry.ptr != ys.data() + ys.size()) return std::nullopt;
  return CoordToken::coord(x, y);
}

inline std::string render_coord_tokens(std::span<const CoordToken> seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out.push_back(' ');
    out += coord_token_name(seq[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// TextTokens

namespace detail {

inline void append_number(TextTokenSeq& out, std::int64_t v) {
  for (const char c : std::to_string(v)) {
    out.push_back(c == '-' ? TextToken::Minus : static_cast<TextToken>(c - '0'));
  }
}

// Greedy scan of one space-delimited chunk: every maximal -?[0-9]+ run is a
// number, stray minus signs are dropped, out-of-range numbers are dropped.
inline void parse_chunk(std::string_view chunk, std::vector<std::int64_t>& numbers) {
  std::size_t i = 0;
  while (i < chunk.size()) {
    const bool neg = chunk[i] == '-';
    const std::size_t digits_at = neg ? i + 1 : i;
    if (digits_at >= chunk.size() || chunk[digits_at] == '-') {
      ++i;
      continue;
    }
    std::size_t end = digits_at;
    while (end < chunk.size() && chunk[end] != '-') ++end;
    std::int64_t v = 0;
    const auto r = std::from_chars(chunk.data() + i, chunk.data() + end, v);
    if (r.ec == std::errc{}) numbers.push_back(v);
    i = end;
  }
}

}  // namespace detail

/// The RelTokens offsets written out in decimal: x and y separated by a space,
/// consecutive offsets separated by a space, and UP in place of the separator
/// after a stroke's final number.
inline TextTokenSeq text_encode(const IntegerInk& ink) {
  TextTokenSeq out;
  bool separate = false;
  for (const auto& t : rel_encode(ink)) {
    if (t.kind == CoordToken::Kind::Up) {
      out.push_back(TextToken::Up);
      separate = false;
      continue;
    }
    if (separate) out.push_back(TextToken::Space);
    detail::append_number(out, t.x);
    out.push_back(TextToken::Space);
    detail::append_number(out, t.y);
    separate = true;
  }
  return out;
}

/// Recovers the RelTokens stream from text. Numbers between UP tokens are
/// paired in order; an unpaired trailing number in a span is dropped.
inline CoordTokenSeq text_to_rel(std::span<const TextToken> seq) {
  CoordTokenSeq out;
  std::string chunk;
  std::vector<std::int64_t> numbers;
  const auto flush_chunk = [&] {
    detail::parse_chunk(chunk, numbers);
    chunk.clear();
  };
  const auto flush_span = [&] {
    flush_chunk();
    for (std::size_t i = 0; i + 1 < numbers.size(); i += 2) {
      out.push_back(CoordToken::coord(numbers[i], numbers[i + 1]));
    }
    numbers.clear();
  };
  for (const TextToken t : seq) {
    switch (t) {
      case TextToken::Space:
        flush_chunk();
        break;
      case TextToken::Up:
        flush_span();
        out.push_back(CoordToken::up());
        break;
      case TextToken::Minus:
        chunk.push_back('-');
        break;
      default:
        if (static_cast<int>(t) < 10) chunk.push_back(static_cast<char>('0' + static_cast<int>(t)));
        break;
    }
  }
  flush_span();
  return out;
}

inline IntegerInk text_decode(std::span<const TextToken> seq, GridPoint origin = {}) {
  return rel_decode(text_to_rel(seq), origin);
}

/// Vocabulary spelling of a text token; the space is a literal " ".
inline std::string_view text_token_name(TextToken t) {
  static constexpr std::string_view names[kTextAlphabetSize] = {
      "0", "1", "2", "3", "4", "5", "6", "7", "8", "9", "-", " ", "UP"};
  const auto i = static_cast<std::size_t>(t);
  return i < static_cast<std::size_t>(kTextAlphabetSize) ? names[i] : "?";
}

/// Debug rendering, with the space shown as an open box.
inline std::string render_text_tokens(std::span<const TextToken> seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out.push_back(' ');
    out += seq[i] == TextToken::Space ? std::string("␣") : std::string(text_token_name(seq[i]));
  }
  return out;
}

}  // namespace scribetok
