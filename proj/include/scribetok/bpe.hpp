#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "scribetok/baselines.hpp"
#include "scribetok/error.hpp"
#include "scribetok/scribe.hpp"

namespace scribetok {

enum class Representation { Scribe, Abs, Rel, Text };

constexpr std::string_view representation_tag(Representation r) {
  switch (r) {
    case Representation::Scribe: return "scribe";
    case Representation::Abs: return "abs";
    case Representation::Rel: return "rel";
    case Representation::Text: return "text";
  }
  return "?";
}

inline std::optional<Representation> parse_representation(std::string_view tag) {
  for (auto r : {Representation::Scribe, Representation::Abs, Representation::Rel,
                 Representation::Text}) {
    if (representation_tag(r) == tag) return r;
  }
  return std::nullopt;
}

struct Merge {
  TokenId left = 0;
  TokenId right = 0;
  friend bool operator==(const Merge&, const Merge&) = default;
};

/// Base tokens with fixed ids followed by merged tokens, one per merge rule in
/// learned order. Ids 0..3 are always PAD, START, END, UNKNOWN. A base token
/// may take part in merges unless it is a special or a pen-state token
/// (UP/DOWN); merged tokens are always mergeable. Immutable once built.
class Vocab {
 public:
  Vocab() = default;

  /// Validates every structural invariant; throws InvalidToken naming the
  /// offending field otherwise.
  Vocab(Representation representation, double delta, std::vector<std::string> base_tokens,
        std::vector<Merge> merges = {})
      : representation_(representation),
        delta_(delta),
        base_(std::move(base_tokens)),
        merges_(std::move(merges)) {
    if (base_.size() < static_cast<std::size_t>(special::kCount)) {
      throw Error(ErrorCode::InvalidToken, "base_tokens: fewer entries than reserved specials");
    }
    if (base_.size() > static_cast<std::size_t>(std::numeric_limits<TokenId>::max() / 2)) {
      throw Error(ErrorCode::InvalidToken, "base_tokens: too many entries");
    }
    for (TokenId id = 0; id < special::kCount; ++id) {
      if (base_[static_cast<std::size_t>(id)] != special::kNames[static_cast<std::size_t>(id)]) {
        throw Error(ErrorCode::InvalidToken,
                    "base_tokens[" + std::to_string(id) + "]: expected reserved special " +
                        std::string(special::kNames[static_cast<std::size_t>(id)]));
      }
    }
    check_layout();
    mergeable_.resize(base_.size());
    for (std::size_t i = 0; i < base_.size(); ++i) {
      if (!by_name_.emplace(base_[i], static_cast<TokenId>(i)).second) {
        throw Error(ErrorCode::InvalidToken,
                    "base_tokens[" + std::to_string(i) + "]: duplicate token '" + base_[i] + "'");
      }
      mergeable_[i] = i >= static_cast<std::size_t>(special::kCount) && base_[i] != "UP" &&
                      base_[i] != "DOWN";
      if (auto c = parse_coord_token(base_[i]); c && c->kind == CoordToken::Kind::Coord) {
        coords_.emplace(coord_key(c->x, c->y), static_cast<TokenId>(i));
      }
    }

    // Expansions are stored flattened: token id -> [start, end) in expansion_.
    spans_.reserve(size());
    for (std::size_t i = 0; i < base_.size(); ++i) {
      spans_.push_back({static_cast<std::uint32_t>(expansion_.size()),
                        static_cast<std::uint32_t>(expansion_.size() + 1)});
      expansion_.push_back(static_cast<TokenId>(i));
    }
    for (std::size_t r = 0; r < merges_.size(); ++r) {
      const Merge m = merges_[r];
      const auto limit = static_cast<TokenId>(base_.size() + r);
      const std::string where = "merges[" + std::to_string(r) + "]";
      if (m.left < 0 || m.left >= limit || m.right < 0 || m.right >= limit) {
        throw Error(ErrorCode::InvalidToken,
                    where + ": references an id that is not defined before this rule");
      }
      if (!is_mergeable(m.left) || !is_mergeable(m.right)) {
        const TokenId bad = is_mergeable(m.left) ? m.right : m.left;
        throw Error(ErrorCode::InvalidToken,
                    where + ": references non-mergeable token " + base_[static_cast<std::size_t>(bad)]);
      }
      if (!ranks_.emplace(pair_key(m.left, m.right), static_cast<TokenId>(r)).second) {
        throw Error(ErrorCode::InvalidToken, where + ": duplicate merge rule");
      }
      const auto start = static_cast<std::uint32_t>(expansion_.size());
      for (TokenId side : {m.left, m.right}) {
        const auto [s, e] = spans_[static_cast<std::size_t>(side)];
        for (auto k = s; k < e; ++k) {
          const TokenId base_id = expansion_[k];
          expansion_.push_back(base_id);
        }
      }
      spans_.push_back({start, static_cast<std::uint32_t>(expansion_.size())});
    }
  }

  Representation representation() const { return representation_; }
  double delta() const { return delta_; }
  std::size_t size() const { return base_.size() + merges_.size(); }
  std::size_t base_size() const { return base_.size(); }
  const std::vector<std::string>& base_tokens() const { return base_; }
  const std::vector<Merge>& merges() const { return merges_; }

  bool contains(TokenId id) const { return id >= 0 && static_cast<std::size_t>(id) < size(); }
  bool is_base(TokenId id) const { return id >= 0 && static_cast<std::size_t>(id) < base_.size(); }

  bool is_mergeable(TokenId id) const {
    if (!contains(id)) return false;
    return static_cast<std::size_t>(id) >= base_.size() || mergeable_[static_cast<std::size_t>(id)];
  }

  std::optional<TokenId> id_of(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<TokenId> coord_id(std::int64_t x, std::int64_t y) const {
    auto it = coords_.find(coord_key(x, y));
    if (it == coords_.end()) return std::nullopt;
    return it->second;
  }

  /// Rank of the merge rule joining (left, right), if any.
  std::optional<TokenId> merge_rank(TokenId left, TokenId right) const {
    auto it = ranks_.find(pair_key(left, right));
    if (it == ranks_.end()) return std::nullopt;
    return it->second;
  }

  /// Base ids a token stands for; a base id expands to itself.
  std::span<const TokenId> expand(TokenId id) const {
    if (!contains(id)) {
      throw Error(ErrorCode::InvalidToken, "token id " + std::to_string(id) + " is not in the vocabulary");
    }
    const auto [s, e] = spans_[static_cast<std::size_t>(id)];
    return {expansion_.data() + s, e - s};
  }

  std::string token_name(TokenId id) const {
    if (is_base(id)) return base_[static_cast<std::size_t>(id)];
    std::string out;
    for (TokenId b : expand(id)) {
      if (!out.empty()) out.push_back('+');
      out += base_[static_cast<std::size_t>(b)];
    }
    return out;
  }

  static std::uint64_t pair_key(TokenId left, TokenId right) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(left)) << 32) |
           static_cast<std::uint32_t>(right);
  }

 private:
  struct Span {
    std::uint32_t start;
    std::uint32_t end;
  };

  static std::pair<std::int64_t, std::int64_t> coord_key(std::int64_t x, std::int64_t y) {
    return {x, y};
  }

  // Scribe and text alphabets are fixed; coordinate vocabularies are UP
  // followed by "(x,y)" tokens.
  void check_layout() const {
    const auto expect_exact = [&](const std::vector<std::string>& names) {
      if (base_ != names) {
        throw Error(ErrorCode::InvalidToken, "base_tokens: does not match the fixed " +
                                                 std::string(representation_tag(representation_)) +
                                                 " alphabet");
      }
    };
    switch (representation_) {
      case Representation::Scribe:
        expect_exact(scribe::base_token_names());
        break;
      case Representation::Text: {
        std::vector<std::string> names(special::kNames.begin(), special::kNames.end());
        for (int i = 0; i < kTextAlphabetSize; ++i) {
          names.emplace_back(text_token_name(static_cast<TextToken>(i)));
        }
        expect_exact(names);
        break;
      }
      case Representation::Abs:
      case Representation::Rel:
        if (base_.size() <= static_cast<std::size_t>(special::kCount) ||
            base_[static_cast<std::size_t>(special::kCount)] != "UP") {
          throw Error(ErrorCode::InvalidToken, "base_tokens[4]: coordinate vocabularies put UP at id 4");
        }
        for (std::size_t i = static_cast<std::size_t>(special::kCount) + 1; i < base_.size(); ++i) {
          const auto c = parse_coord_token(base_[i]);
          if (!c || c->kind != CoordToken::Kind::Coord) {
            throw Error(ErrorCode::InvalidToken,
                        "base_tokens[" + std::to_string(i) + "]: '" + base_[i] + "' is not a coordinate token");
          }
        }
        break;
    }
  }

  Representation representation_ = Representation::Scribe;
  double delta_ = 1.0;
  std::vector<std::string> base_;
  std::vector<Merge> merges_;
  std::vector<bool> mergeable_;
  std::unordered_map<std::string, TokenId> by_name_;
  std::map<std::pair<std::int64_t, std::int64_t>, TokenId> coords_;
  std::unordered_map<std::uint64_t, TokenId> ranks_;
  std::vector<Span> spans_;
  std::vector<TokenId> expansion_;
};

// ---------------------------------------------------------------------------
// Base vocabularies

inline Vocab scribe_base_vocab(double delta) {
  return Vocab(Representation::Scribe, delta, scribe::base_token_names());
}

inline Vocab text_base_vocab(double delta) {
  std::vector<std::string> names;
  for (auto n : special::kNames) names.emplace_back(n);
  for (int i = 0; i < kTextAlphabetSize; ++i) {
    names.emplace_back(text_token_name(static_cast<TextToken>(i)));
  }
  return Vocab(Representation::Text, delta, std::move(names));
}

/// Specials, UP, then the given coordinates in ascending (x, y) order.
inline Vocab coord_base_vocab(Representation r, double delta,
                              std::vector<std::pair<std::int64_t, std::int64_t>> coords) {
  if (r != Representation::Abs && r != Representation::Rel) {
    throw Error(ErrorCode::ConfigMismatch, "coordinate vocabularies are for abs/rel only");
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  std::vector<std::string> names;
  names.reserve(coords.size() + 5);
  for (auto n : special::kNames) names.emplace_back(n);
  names.emplace_back("UP");
  for (const auto& [x, y] : coords) names.push_back(coord_token_name(CoordToken::coord(x, y)));
  return Vocab(r, delta, std::move(names));
}

inline Vocab with_merges(const Vocab& base, std::vector<Merge> merges) {
  return Vocab(base.representation(), base.delta(), base.base_tokens(), std::move(merges));
}

// ---------------------------------------------------------------------------
// Training

namespace detail {

class BpeTrainer {
 public:
  BpeTrainer(std::span<const TokenSeq> corpus, const Vocab& base) : base_(base) {
    std::size_t total = 0;
    for (const auto& s : corpus) total += s.size();
    if (total > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
      throw Error(ErrorCode::InvalidParams, "training corpus exceeds 2^31 tokens");
    }
    mergeable_.resize(base.base_size());
    for (std::size_t i = 0; i < base.base_size(); ++i) {
      mergeable_[i] = base.is_mergeable(static_cast<TokenId>(i));
    }
    ids_.reserve(total);
    prev_.reserve(total);
    next_.reserve(total);
    for (const auto& seq : corpus) {
      const auto begin = static_cast<std::int32_t>(ids_.size());
      for (std::size_t i = 0; i < seq.size(); ++i) {
        const TokenId t = seq[i];
        if (!base.is_base(t)) {
          throw Error(ErrorCode::InvalidToken,
                      "training corpus holds id " + std::to_string(t) + " outside the base vocabulary");
        }
        const auto pos = static_cast<std::int32_t>(ids_.size());
        ids_.push_back(t);
        prev_.push_back(i == 0 ? -1 : pos - 1);
        next_.push_back(i + 1 == seq.size() ? -1 : pos + 1);
      }
      for (auto pos = begin; pos + 1 < static_cast<std::int32_t>(ids_.size()); ++pos) {
        if (next_[static_cast<std::size_t>(pos)] >= 0) {
          add(ids_[static_cast<std::size_t>(pos)], ids_[static_cast<std::size_t>(pos) + 1], pos, false);
        }
      }
    }
    for (const auto& [key, count] : counts_) heap_.push({count, key});
  }

  std::vector<Merge> run(std::size_t target_size) {
    std::vector<Merge> merges;
    while (base_.base_size() + merges.size() < target_size) {
      const auto best = pop_best();
      if (!best || best->count < 2) break;
      const auto left = static_cast<TokenId>(best->key >> 32);
      const auto right = static_cast<TokenId>(best->key & 0xffffffffu);
      const auto fresh = static_cast<TokenId>(base_.base_size() + merges.size());
      merges.push_back({left, right});
      mergeable_.push_back(true);
      apply(best->key, left, right, fresh);
    }
    return merges;
  }

 private:
  struct Entry {
    std::int64_t count;
    std::uint64_t key;
    // Highest count first, then the smallest (left, right).
    bool operator<(const Entry& o) const {
      return count != o.count ? count < o.count : key > o.key;
    }
  };

  bool mergeable(TokenId id) const {
    return mergeable_[static_cast<std::size_t>(id)];
  }

  void add(TokenId left, TokenId right, std::int32_t pos, bool push) {
    if (!mergeable(left) || !mergeable(right)) return;
    const auto key = Vocab::pair_key(left, right);
    auto& c = counts_[key];
    ++c;
    where_[key].push_back(pos);
    if (push) heap_.push({c, key});
  }

  void remove(TokenId left, TokenId right) {
    if (!mergeable(left) || !mergeable(right)) return;
    auto it = counts_.find(Vocab::pair_key(left, right));
    if (it != counts_.end()) --it->second;
  }

  std::optional<Entry> pop_best() {
    while (!heap_.empty()) {
      const Entry top = heap_.top();
      heap_.pop();
      auto it = counts_.find(top.key);
      const std::int64_t actual = it == counts_.end() ? 0 : it->second;
      if (actual == top.count) return top;
      // Stale: counts only drop between pushes, so requeue the live value.
      if (actual > 0 && actual < top.count) heap_.push({actual, top.key});
    }
    return std::nullopt;
  }

  void apply(std::uint64_t key, TokenId left, TokenId right, TokenId fresh) {
    std::vector<std::int32_t> positions = std::move(where_[key]);
    where_.erase(key);
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
    for (const std::int32_t pos : positions) {
      const auto p = static_cast<std::size_t>(pos);
      if (ids_[p] != left) continue;
      const std::int32_t nx = next_[p];
      if (nx < 0 || ids_[static_cast<std::size_t>(nx)] != right) continue;
      const std::int32_t pv = prev_[p];
      const std::int32_t nn = next_[static_cast<std::size_t>(nx)];
      if (pv >= 0) remove(ids_[static_cast<std::size_t>(pv)], left);
      if (nn >= 0) remove(right, ids_[static_cast<std::size_t>(nn)]);
      ids_[p] = fresh;
      ids_[static_cast<std::size_t>(nx)] = -1;
      next_[p] = nn;
      if (nn >= 0) prev_[static_cast<std::size_t>(nn)] = pos;
      if (pv >= 0) add(ids_[static_cast<std::size_t>(pv)], fresh, pv, true);
      if (nn >= 0) add(fresh, ids_[static_cast<std::size_t>(nn)], pos, true);
    }
    counts_.erase(key);
  }

  const Vocab& base_;
  std::vector<TokenId> ids_;
  std::vector<std::int32_t> prev_;
  std::vector<std::int32_t> next_;
  std::vector<bool> mergeable_;
  std::unordered_map<std::uint64_t, std::int64_t> counts_;
  std::unordered_map<std::uint64_t, std::vector<std::int32_t>> where_;
  std::priority_queue<Entry> heap_;
};

}  // namespace detail

/// Greedy BPE over the mergeable tokens of `base`. Each step merges the most
/// frequent adjacent pair (ties to the smallest (left, right)) until the
/// vocabulary holds `target_size` ids or no pair occurs twice. Pairs never
/// span a non-mergeable token or a sequence boundary.
inline Vocab bpe_train(std::span<const TokenSeq> corpus, const Vocab& base, std::size_t target_size) {
  if (!base.merges().empty()) {
    throw Error(ErrorCode::InvalidParams, "training starts from a merge-free base vocabulary");
  }
  if (target_size < base.base_size()) {
    throw Error(ErrorCode::BudgetExhausted,
                "target size " + std::to_string(target_size) + " is below the base vocabulary size " +
                    std::to_string(base.base_size()));
  }
  detail::BpeTrainer trainer(corpus, base);
  return with_merges(base, trainer.run(target_size));
}

// ---------------------------------------------------------------------------
// Encoding and decoding

/// Applies merges in rule order, each rule left to right. Implemented as
/// repeated lowest-rank-leftmost merging, which yields the same result since
/// a rule's operands always predate it.
inline TokenSeq bpe_encode(std::span<const TokenId> tokens, const Vocab& vocab) {
  const std::size_t n = tokens.size();
  TokenSeq ids(tokens.begin(), tokens.end());
  for (const TokenId t : ids) {
    if (!vocab.is_base(t)) {
      throw Error(ErrorCode::InvalidToken, "id " + std::to_string(t) + " is not a base token");
    }
  }
  if (vocab.merges().empty() || n < 2) return ids;

  std::vector<std::int32_t> next(n);
  std::vector<std::int32_t> prev(n);
  for (std::size_t i = 0; i < n; ++i) {
    next[i] = static_cast<std::int32_t>(i + 1);
    prev[i] = static_cast<std::int32_t>(i) - 1;
  }
  const auto end = static_cast<std::int32_t>(n);
  const auto base = static_cast<TokenId>(vocab.base_size());

  // Min-heap on (rank << 32 | position).
  std::vector<std::uint64_t> heap;
  heap.reserve(n);
  const auto push = [&](std::int32_t pos, TokenId left, TokenId right) {
    if (auto r = vocab.merge_rank(left, right)) {
      heap.push_back((static_cast<std::uint64_t>(*r) << 32) | static_cast<std::uint32_t>(pos));
      std::push_heap(heap.begin(), heap.end(), std::greater<>{});
    }
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (auto r = vocab.merge_rank(ids[i], ids[i + 1])) {
      heap.push_back((static_cast<std::uint64_t>(*r) << 32) | static_cast<std::uint32_t>(i));
    }
  }
  std::make_heap(heap.begin(), heap.end(), std::greater<>{});

  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), std::greater<>{});
    const std::uint64_t item = heap.back();
    heap.pop_back();
    const auto rank = static_cast<TokenId>(item >> 32);
    const auto pos = static_cast<std::int32_t>(item & 0xffffffffu);
    const auto p = static_cast<std::size_t>(pos);
    if (ids[p] < 0) continue;
    const std::int32_t nx = next[p];
    if (nx >= end) continue;
    const Merge rule = vocab.merges()[static_cast<std::size_t>(rank)];
    if (ids[p] != rule.left || ids[static_cast<std::size_t>(nx)] != rule.right) continue;

    const TokenId fresh = base + rank;
    ids[p] = fresh;
    ids[static_cast<std::size_t>(nx)] = -1;
    const std::int32_t nn = next[static_cast<std::size_t>(nx)];
    next[p] = nn;
    if (nn < end) prev[static_cast<std::size_t>(nn)] = pos;
    if (prev[p] >= 0) push(prev[p], ids[static_cast<std::size_t>(prev[p])], fresh);
    if (nn < end) push(pos, fresh, ids[static_cast<std::size_t>(nn)]);
  }

  TokenSeq out;
  out.reserve(n);
  for (const TokenId t : ids) {
    if (t >= 0) out.push_back(t);
  }
  return out;
}

inline TokenSeq bpe_decode(std::span<const TokenId> tokens, const Vocab& vocab) {
  TokenSeq out;
  out.reserve(tokens.size());
  for (const TokenId t : tokens) {
    const auto e = vocab.expand(t);
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vocabulary file
//
// A JSON document, written with a fixed layout so identical vocabularies give
// identical bytes:
//
//   {
//     "format": "scribetok-vocab",
//     "version": 1,
//     "representation": "scribe",
//     "delta": 8.0,
//     "specials": {"PAD": 0, "START": 1, "END": 2, "UNKNOWN": 3},
//     "base_tokens": [
//       "PAD",
//       ...
//     ],
//     "merges": [
//       [4, 4],
//       ...
//     ]
//   }
//
// Merge i defines id base_size + i.

inline constexpr std::string_view kVocabFormat = "scribetok-vocab";
inline constexpr int kVocabVersion = 1;

inline std::string vocab_to_string(const Vocab& v) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"format\": " << nlohmann::json(kVocabFormat).dump() << ",\n";
  os << "  \"version\": " << kVocabVersion << ",\n";
  os << "  \"representation\": " << nlohmann::json(representation_tag(v.representation())).dump()
     << ",\n";
  os << "  \"delta\": " << nlohmann::json(v.delta()).dump() << ",\n";
  os << "  \"specials\": {";
  for (TokenId id = 0; id < special::kCount; ++id) {
    if (id) os << ", ";
    os << '"' << special::kNames[static_cast<std::size_t>(id)] << "\": " << id;
  }
  os << "},\n";
  os << "  \"base_tokens\": [\n";
  for (std::size_t i = 0; i < v.base_tokens().size(); ++i) {
    os << "    " << nlohmann::json(v.base_tokens()[i]).dump()
       << (i + 1 < v.base_tokens().size() ? ",\n" : "\n");
  }
  os << "  ],\n";
  os << "  \"merges\": [";
  for (std::size_t i = 0; i < v.merges().size(); ++i) {
    os << (i ? ",\n    " : "\n    ") << '[' << v.merges()[i].left << ", " << v.merges()[i].right << ']';
  }
  os << (v.merges().empty() ? "]\n" : "\n  ]\n");
  os << "}\n";
  return os.str();
}

namespace detail {

inline std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

[[noreturn]] inline void vocab_parse_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ParseError, "vocab field '" + field + "': " + what);
}

template <typename T>
T vocab_field(const nlohmann::json& doc, const char* name) {
  if (!doc.contains(name)) vocab_parse_error(name, "missing");
  try {
    return doc.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    vocab_parse_error(name, "has the wrong type");
  }
}

}  // namespace detail

inline Vocab vocab_from_string(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError,
                "vocab line " + std::to_string(detail::line_of(text, e.byte > 0 ? e.byte - 1 : 0)) +
                    ": malformed JSON");
  }
  if (!doc.is_object()) detail::vocab_parse_error("<root>", "expected an object");
  if (detail::vocab_field<std::string>(doc, "format") != kVocabFormat) {
    detail::vocab_parse_error("format", "expected \"scribetok-vocab\"");
  }
  if (detail::vocab_field<int>(doc, "version") != kVocabVersion) {
    detail::vocab_parse_error("version", "unsupported version");
  }
  const auto tag = detail::vocab_field<std::string>(doc, "representation");
  const auto repr = parse_representation(tag);
  if (!repr) detail::vocab_parse_error("representation", "unknown tag '" + tag + "'");
  const auto delta = detail::vocab_field<double>(doc, "delta");
  if (!(delta > 0.0)) detail::vocab_parse_error("delta", "must be positive");

  const auto specials = detail::vocab_field<std::map<std::string, TokenId>>(doc, "specials");
  for (TokenId id = 0; id < special::kCount; ++id) {
    const std::string name(special::kNames[static_cast<std::size_t>(id)]);
    auto it = specials.find(name);
    if (it == specials.end() || it->second != id) {
      detail::vocab_parse_error("specials", name + " must map to id " + std::to_string(id));
    }
  }
  if (specials.size() != static_cast<std::size_t>(special::kCount)) {
    detail::vocab_parse_error("specials", "unexpected entry");
  }

  auto base = detail::vocab_field<std::vector<std::string>>(doc, "base_tokens");
  const auto raw_merges = detail::vocab_field<std::vector<std::vector<TokenId>>>(doc, "merges");
  std::vector<Merge> merges;
  merges.reserve(raw_merges.size());
  for (std::size_t i = 0; i < raw_merges.size(); ++i) {
    if (raw_merges[i].size() != 2) {
      detail::vocab_parse_error("merges[" + std::to_string(i) + "]", "expected an id pair");
    }
    merges.push_back({raw_merges[i][0], raw_merges[i][1]});
  }
  try {
    return Vocab(*repr, delta, std::move(base), std::move(merges));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string("vocab invariant violated: ") + e.what());
  }
}

inline void vocab_save(const Vocab& v, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << vocab_to_string(v);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

inline Vocab vocab_load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return vocab_from_string(ss.str());
}

/// FNV-1a over the serialized vocabulary; identifies a vocab in token files.
inline std::uint64_t vocab_hash(const Vocab& v) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : vocab_to_string(v)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace scribetok
