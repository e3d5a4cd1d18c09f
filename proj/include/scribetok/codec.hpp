#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scribetok/baselines.hpp"
#include "scribetok/bpe.hpp"
#include "scribetok/error.hpp"
#include "scribetok/ink.hpp"
#include "scribetok/scribe.hpp"

// Glue between the per-representation codecs and vocabulary ids.

namespace scribetok {

inline constexpr TokenId kTextFirstId = special::kCount;
inline constexpr TokenId kCoordUpId = special::kCount;

/// The point that token sequences are decoded from: the first point, or the
/// grid origin for empty ink.
inline GridPoint origin_of(const IntegerInk& ink) {
  if (ink.strokes.empty() || ink.strokes.front().empty()) return {};
  return ink.strokes.front().front();
}

namespace detail {

inline TokenSeq coord_ids(const CoordTokenSeq& seq, const Vocab& vocab) {
  TokenSeq out;
  out.reserve(seq.size());
  for (const auto& t : seq) {
    switch (t.kind) {
      case CoordToken::Kind::Up: out.push_back(kCoordUpId); break;
      case CoordToken::Kind::Unknown: out.push_back(special::kUnknown); break;
      case CoordToken::Kind::Coord:
        out.push_back(vocab.coord_id(t.x, t.y).value_or(special::kUnknown));
        break;
    }
  }
  return out;
}

inline CoordTokenSeq coord_tokens(std::span<const TokenId> ids, const Vocab& vocab) {
  CoordTokenSeq out;
  out.reserve(ids.size());
  for (const TokenId id : ids) {
    if (!vocab.is_base(id)) {
      throw Error(ErrorCode::InvalidToken, "id " + std::to_string(id) + " is not a base token");
    }
    if (id == special::kUnknown) {
      out.push_back(CoordToken::unknown());
    } else if (id == kCoordUpId) {
      out.push_back(CoordToken::up());
    } else if (id > kCoordUpId) {
      out.push_back(*parse_coord_token(vocab.base_tokens()[static_cast<std::size_t>(id)]));
    }
  }
  return out;
}

inline void require_base(std::span<const TokenId> ids, const Vocab& vocab) {
  for (const TokenId id : ids) {
    if (!vocab.is_base(id)) {
      throw Error(ErrorCode::InvalidToken, "id " + std::to_string(id) + " is not a base token");
    }
  }
}

}  // namespace detail

inline TokenSeq text_ids(std::span<const TextToken> seq) {
  TokenSeq out;
  out.reserve(seq.size());
  for (const TextToken t : seq) out.push_back(kTextFirstId + static_cast<TokenId>(t));
  return out;
}

/// Base-level ids of `ink` under the vocabulary's representation. Coordinates
/// missing from an abs/rel vocabulary become UNKNOWN.
inline TokenSeq encode_base(const IntegerInk& ink, const Vocab& vocab) {
  switch (vocab.representation()) {
    case Representation::Scribe: return scribe_tokenize(ink);
    case Representation::Text: return text_ids(text_encode(ink));
    case Representation::Abs: return detail::coord_ids(abs_encode(ink), vocab);
    case Representation::Rel: return detail::coord_ids(rel_encode(ink), vocab);
  }
  return {};
}

/// Inverse of encode_base. Specials other than UNKNOWN are ignored.
inline IntegerInk decode_base(std::span<const TokenId> ids, const Vocab& vocab, GridPoint origin) {
  switch (vocab.representation()) {
    case Representation::Scribe:
      detail::require_base(ids, vocab);
      return scribe_detokenize(ids, origin);
    case Representation::Text: {
      detail::require_base(ids, vocab);
      TextTokenSeq text;
      text.reserve(ids.size());
      for (const TokenId id : ids) {
        if (id >= kTextFirstId) text.push_back(static_cast<TextToken>(id - kTextFirstId));
      }
      return text_decode(text, origin);
    }
    case Representation::Abs: return abs_decode(detail::coord_tokens(ids, vocab));
    case Representation::Rel: return rel_decode(detail::coord_tokens(ids, vocab), origin);
  }
  return {};
}

/// Base vocabulary for a representation. Abs/rel collect every coordinate
/// token the corpus produces; scribe and text ignore the corpus.
inline Vocab base_vocab_for(Representation r, double delta, std::span<const IntegerInk> corpus) {
  switch (r) {
    case Representation::Scribe: return scribe_base_vocab(delta);
    case Representation::Text: return text_base_vocab(delta);
    case Representation::Abs:
    case Representation::Rel: {
      std::vector<std::pair<std::int64_t, std::int64_t>> coords;
      for (const auto& ink : corpus) {
        if (r == Representation::Rel && ink.strokes.empty()) continue;
        const auto seq = r == Representation::Abs ? abs_encode(ink) : rel_encode(ink);
        for (const auto& t : seq) {
          if (t.kind == CoordToken::Kind::Coord) coords.emplace_back(t.x, t.y);
        }
      }
      return coord_base_vocab(r, delta, std::move(coords));
    }
  }
  return scribe_base_vocab(delta);
}

/// Builds the base vocabulary from `corpus` and learns merges up to
/// `target_size` ids (specials included).
inline Vocab train_vocab(std::span<const IntegerInk> corpus, Representation r, double delta,
                         std::size_t target_size) {
  const Vocab base = base_vocab_for(r, delta, corpus);
  if (target_size < base.base_size()) {
    throw Error(ErrorCode::BudgetExhausted, "target size " + std::to_string(target_size) +
                                                " is below the " + std::string(representation_tag(r)) +
                                                " base vocabulary size " + std::to_string(base.base_size()));
  }
  std::vector<TokenSeq> seqs;
  seqs.reserve(corpus.size());
  for (const auto& ink : corpus) {
    if (ink.strokes.empty()) continue;
    seqs.push_back(encode_base(ink, base));
  }
  return bpe_train(seqs, base, target_size);
}

inline TokenSeq tokenize(const IntegerInk& ink, const Vocab& vocab) {
  return bpe_encode(encode_base(ink, vocab), vocab);
}

inline IntegerInk detokenize(std::span<const TokenId> ids, const Vocab& vocab, GridPoint origin) {
  return decode_base(bpe_decode(ids, vocab), vocab, origin);
}

inline std::string render_tokens(std::span<const TokenId> ids, const Vocab& vocab) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out.push_back(' ');
    std::string name = vocab.token_name(ids[i]);
    if (vocab.representation() == Representation::Text) {
      for (auto& c : name) {
        if (c == ' ') c = '_';
      }
    }
    out += "[" + name + "]";
  }
  return out;
}

}  // namespace scribetok
