#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scribetok/chain.hpp"
#include "scribetok/ink.hpp"
#include "scribetok/smooth.hpp"

namespace scribetok {

using TokenId = std::int32_t;
using TokenSeq = std::vector<TokenId>;

/// Reserved ids shared by every representation's vocabulary.
namespace special {
inline constexpr TokenId kPad = 0;
inline constexpr TokenId kStart = 1;
inline constexpr TokenId kEnd = 2;
inline constexpr TokenId kUnknown = 3;
inline constexpr TokenId kCount = 4;
inline constexpr std::array<std::string_view, 4> kNames = {"PAD", "START", "END", "UNKNOWN"};
}  // namespace special

namespace scribe {

inline constexpr TokenId kFirstDirection = 4;
inline constexpr TokenId kDown = 12;
inline constexpr TokenId kUp = 13;
inline constexpr TokenId kBaseSize = 14;

constexpr TokenId token_of(Direction d) { return kFirstDirection + static_cast<TokenId>(d); }

constexpr std::optional<Direction> direction_of_token(TokenId id) {
  if (id < kFirstDirection || id >= kDown) return std::nullopt;
  return static_cast<Direction>(id - kFirstDirection);
}

constexpr bool is_direction(TokenId id) { return id >= kFirstDirection && id < kDown; }

/// Base token names in id order: the four specials, eight directions, DOWN, UP.
inline std::vector<std::string> base_token_names() {
  std::vector<std::string> names;
  for (auto n : special::kNames) names.emplace_back(n);
  for (auto d : kAllDirections) names.emplace_back(direction_name(d));
  names.emplace_back("DOWN");
  names.emplace_back("UP");
  return names;
}

inline std::string_view token_name(TokenId id) {
  static const std::vector<std::string> names = base_token_names();
  if (id < 0 || id >= kBaseSize) return "?";
  return names[static_cast<std::size_t>(id)];
}

inline std::optional<TokenId> token_from_name(std::string_view name) {
  for (TokenId id = 0; id < kBaseSize; ++id) {
    if (token_name(id) == name) return id;
  }
  return std::nullopt;
}

}  // namespace scribe

/// Appends the ScribeTokens encoding of `ink` to `out`: DOWN, the chain code
/// of every within-stroke segment, UP, then the pen-in-air chain code to the
/// next stroke's first point.
inline void scribe_tokenize_into(const IntegerInk& ink, TokenSeq& out) {
  const auto emit = [&out](Direction d) { out.push_back(scribe::token_of(d)); };
  for (std::size_t j = 0; j < ink.strokes.size(); ++j) {
    const IntStroke& stroke = ink.strokes[j];
    out.push_back(scribe::kDown);
    for (std::size_t i = 1; i < stroke.size(); ++i) {
      for_each_bresenham_step(stroke[i - 1], stroke[i], emit);
    }
    out.push_back(scribe::kUp);
    if (j + 1 < ink.strokes.size()) {
      for_each_bresenham_step(stroke.back(), ink.strokes[j + 1].front(), emit);
    }
  }
}

inline TokenSeq scribe_tokenize(const IntegerInk& ink) {
  validate(ink);
  TokenSeq out;
  std::size_t hint = 2 * ink.strokes.size();
  for (const auto& s : ink.strokes) hint += 2 * s.size();
  out.reserve(hint);
  scribe_tokenize_into(ink, out);
  return out;
}

/// Total decoder over base ScribeTokens. Leading moves travel in the air,
/// repeated DOWN/UP are no-ops, an unterminated stroke is closed at the end,
/// and specials (including UNKNOWN) are skipped. Ids outside the base range
/// are skipped as well. Positions saturate at the 32-bit limits.
inline IntegerInk scribe_detokenize(std::span<const TokenId> tokens, GridPoint origin = {}) {
  IntegerInk ink;
  GridPoint pos = origin;
  bool pen_down = false;
  IntStroke open;
  for (const TokenId t : tokens) {
    if (t == scribe::kDown) {
      if (!pen_down) {
        pen_down = true;
        open.assign(1, pos);
      }
    } else if (t == scribe::kUp) {
      if (pen_down) {
        pen_down = false;
        ink.strokes.push_back(std::move(open));
        open.clear();
      }
    } else if (const auto d = scribe::direction_of_token(t)) {
      const Displacement u = displacement(*d);
      pos = {detail::saturate_int32(static_cast<std::int64_t>(pos.x) + u.dx),
             detail::saturate_int32(static_cast<std::int64_t>(pos.y) + u.dy)};
      if (pen_down) open.push_back(pos);
    }
  }
  if (pen_down) ink.strokes.push_back(std::move(open));
  return ink;
}

/// The path a ScribeTokens round trip reproduces: each stroke expanded to the
/// concatenated Bresenham cells of its segments (shared endpoints once).
inline IntegerInk rasterize_ink(const IntegerInk& ink) {
  IntegerInk out;
  out.strokes.reserve(ink.strokes.size());
  for (const auto& stroke : ink.strokes) {
    IntStroke& dst = out.strokes.emplace_back();
    if (stroke.empty()) continue;
    dst.push_back(stroke.front());
    for (std::size_t i = 1; i < stroke.size(); ++i) {
      for_each_bresenham_step(stroke[i - 1], stroke[i],
                              [&](Direction d) { dst.push_back(step(dst.back(), d)); });
    }
  }
  return out;
}

/// Tokens back to smoothed ink in input units: detokenize, rescale by the
/// grid spacing, downsample, then Savitzky-Golay.
inline RawInk scribe_decode_pipeline(std::span<const TokenId> tokens, const QuantizationParams& q,
                                     const PostprocessParams& post = {}, GridPoint origin = {}) {
  validate(post);
  return postprocess_ink(dequantize(scribe_detokenize(tokens, origin), q), post);
}

inline std::string render_scribe_tokens(std::span<const TokenId> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += scribe::token_name(tokens[i]);
  }
  return out;
}

}  // namespace scribetok
