#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scribetok/bpe.hpp"
#include "scribetok/codec.hpp"
#include "scribetok/error.hpp"
#include "scribetok/ink.hpp"

namespace scribetok {

struct SampleStats {
  std::size_t points = 0;
  std::size_t base_tokens = 0;
  std::size_t bpe_tokens = 0;
  // Tokens that can take part in merges (directions, digits, coordinates).
  std::size_t content_base_tokens = 0;
  std::size_t content_bpe_tokens = 0;
  std::size_t unknown_tokens = 0;

  double compression_ratio_base() const { return ratio(base_tokens, bpe_tokens); }
  double compression_ratio_content() const { return ratio(content_base_tokens, content_bpe_tokens); }
  double points_per_token() const {
    return bpe_tokens ? static_cast<double>(points) / static_cast<double>(bpe_tokens) : 0.0;
  }
  double oov_rate() const {
    return bpe_tokens ? static_cast<double>(unknown_tokens) / static_cast<double>(bpe_tokens) : 0.0;
  }

 private:
  static double ratio(std::size_t num, std::size_t den) {
    return den ? static_cast<double>(num) / static_cast<double>(den) : 1.0;
  }
};

/// Compression and OOV figures for one (representation, delta, vocab) cell.
/// Ratios are per-sample means; token totals are kept alongside.
struct CorpusStats {
  Representation representation = Representation::Scribe;
  double delta = 1.0;
  std::size_t vocab_size = 0;
  std::size_t base_vocab_size = 0;
  std::size_t merges = 0;
  std::vector<SampleStats> per_sample;

  double compression_ratio_base = 0.0;
  double compression_ratio_content = 0.0;
  double points_per_token = 0.0;
  double oov_rate = 0.0;

  std::size_t samples() const { return per_sample.size(); }

  SampleStats totals() const {
    SampleStats t;
    for (const auto& s : per_sample) {
      t.points += s.points;
      t.base_tokens += s.base_tokens;
      t.bpe_tokens += s.bpe_tokens;
      t.content_base_tokens += s.content_base_tokens;
      t.content_bpe_tokens += s.content_bpe_tokens;
      t.unknown_tokens += s.unknown_tokens;
    }
    return t;
  }
};

inline SampleStats measure_sample(const IntegerInk& ink, const Vocab& vocab) {
  SampleStats s;
  const TokenSeq base = encode_base(ink, vocab);
  const TokenSeq bpe = bpe_encode(base, vocab);
  s.points = point_count(ink);
  s.base_tokens = base.size();
  s.bpe_tokens = bpe.size();
  for (const TokenId t : base) s.content_base_tokens += vocab.is_mergeable(t) ? 1 : 0;
  for (const TokenId t : bpe) {
    s.content_bpe_tokens += vocab.is_mergeable(t) ? 1 : 0;
    s.unknown_tokens += t == special::kUnknown ? 1 : 0;
  }
  return s;
}

/// Quantizes every sample at `delta`, encodes it with the representation's
/// codec and the vocabulary, and accumulates the figures.
inline CorpusStats measure(std::span<const RawInk> corpus, Representation representation, double delta,
                           const Vocab& vocab) {
  if (vocab.representation() != representation || vocab.delta() != delta) {
    throw Error(ErrorCode::ConfigMismatch,
                "vocabulary is for " + std::string(representation_tag(vocab.representation())) +
                    " at delta " + std::to_string(vocab.delta()) + ", asked for " +
                    std::string(representation_tag(representation)) + " at delta " + std::to_string(delta));
  }
  CorpusStats stats;
  stats.representation = representation;
  stats.delta = delta;
  stats.vocab_size = vocab.size();
  stats.base_vocab_size = vocab.base_size();
  stats.merges = vocab.merges().size();
  stats.per_sample.reserve(corpus.size());
  const QuantizationParams q{delta};
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].strokes.empty()) {
      throw Error(ErrorCode::EmptyInk, "corpus sample " + std::to_string(i) + " has no strokes");
    }
    stats.per_sample.push_back(measure_sample(quantize(corpus[i], q), vocab));
  }
  const double n = static_cast<double>(std::max<std::size_t>(stats.samples(), 1));
  for (const auto& s : stats.per_sample) {
    stats.compression_ratio_base += s.compression_ratio_base();
    stats.compression_ratio_content += s.compression_ratio_content();
    stats.points_per_token += s.points_per_token();
    stats.oov_rate += s.oov_rate();
  }
  stats.compression_ratio_base /= n;
  stats.compression_ratio_content /= n;
  stats.points_per_token /= n;
  stats.oov_rate /= n;
  return stats;
}

struct SweepConfig {
  std::vector<Representation> representations;
  std::vector<double> deltas;
  std::vector<std::size_t> vocab_sizes;
};

/// One report row. `stats` is empty when the base vocabulary alone exceeds
/// the budget.
struct SweepRow {
  Representation representation = Representation::Scribe;
  double delta = 1.0;
  std::size_t vocab_size = 0;
  std::size_t base_vocab_size = 0;
  std::optional<CorpusStats> stats;

  bool absent() const { return !stats.has_value(); }
};

/// Trains on `train` and measures on `eval` for every configuration. Greedy
/// training is prefix-stable, so each (representation, delta) pair trains
/// once at the largest budget and smaller vocabularies keep a merge prefix.
inline std::vector<SweepRow> sweep(std::span<const RawInk> train, std::span<const RawInk> eval,
                                   const SweepConfig& config) {
  if (train.empty() || eval.empty()) {
    throw Error(ErrorCode::EmptyInk, "sweep needs non-empty training and evaluation corpora");
  }
  std::vector<SweepRow> rows;
  for (const Representation r : config.representations) {
    for (const double delta : config.deltas) {
      const QuantizationParams q{delta};
      std::vector<IntegerInk> quantized;
      quantized.reserve(train.size());
      for (const auto& ink : train) quantized.push_back(quantize(ink, q));
      const Vocab base = base_vocab_for(r, delta, quantized);

      std::size_t largest = 0;
      for (const auto size : config.vocab_sizes) {
        if (size >= base.base_size()) largest = std::max(largest, size);
      }
      std::optional<Vocab> full;
      if (largest > 0) full = train_vocab(quantized, r, delta, largest);

      for (const auto size : config.vocab_sizes) {
        SweepRow row;
        row.representation = r;
        row.delta = delta;
        row.vocab_size = size;
        row.base_vocab_size = base.base_size();
        if (size >= base.base_size()) {
          const std::size_t keep = std::min(full->merges().size(), size - base.base_size());
          const Vocab vocab = with_merges(
              base, std::vector<Merge>(full->merges().begin(),
                                       full->merges().begin() + static_cast<std::ptrdiff_t>(keep)));
          row.stats = measure(eval, r, delta, vocab);
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

/// Deterministic split: the last ceil(n * eval_fraction) samples evaluate.
/// Corpora too small to split use every sample for both roles.
inline std::pair<std::vector<RawInk>, std::vector<RawInk>> split_corpus(std::vector<RawInk> corpus,
                                                                        double eval_fraction) {
  if (!(eval_fraction > 0.0 && eval_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidParams, "evaluation fraction must lie in (0, 1)");
  }
  const std::size_t n = corpus.size();
  auto n_eval = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * eval_fraction));
  if (n < 2 || n_eval == 0 || n_eval >= n) return {corpus, corpus};
  std::vector<RawInk> eval(corpus.end() - static_cast<std::ptrdiff_t>(n_eval), corpus.end());
  corpus.resize(n - n_eval);
  return {std::move(corpus), std::move(eval)};
}

// ---------------------------------------------------------------------------
// Reports

inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> columns = {
      "representation", "delta", "vocab_size", "status", "samples", "base_vocab_size", "merges",
      "compression_ratio_base", "compression_ratio_content", "points_per_token", "oov_rate",
      "points", "base_tokens", "bpe_tokens", "unknown_tokens"};
  return columns;
}

/// Comma-separated report, one header line then one line per row. Absent
/// rows leave the measurement columns empty.
inline std::string report_csv(std::span<const SweepRow> rows) {
  std::string out;
  const auto& cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += '\n';
  for (const auto& row : rows) {
    out += std::string(representation_tag(row.representation)) + "," + detail::format_number(row.delta) +
           "," + std::to_string(row.vocab_size) + "," + (row.absent() ? "absent" : "ok");
    if (row.absent()) {
      out += ",," + std::to_string(row.base_vocab_size) + ",,,,,,,,,\n";
      continue;
    }
    const CorpusStats& s = *row.stats;
    const SampleStats t = s.totals();
    out += "," + std::to_string(s.samples()) + "," + std::to_string(s.base_vocab_size) + "," +
           std::to_string(s.merges) + "," + detail::format_number(s.compression_ratio_base) + "," +
           detail::format_number(s.compression_ratio_content) + "," +
           detail::format_number(s.points_per_token) + "," + detail::format_number(s.oov_rate) + "," +
           std::to_string(t.points) + "," + std::to_string(t.base_tokens) + "," +
           std::to_string(t.bpe_tokens) + "," + std::to_string(t.unknown_tokens) + "\n";
  }
  return out;
}

/// Same rows as report_csv, as {"columns": [...], "rows": [{...}, ...]}.
/// Absent rows carry null measurements.
inline nlohmann::ordered_json report_json(std::span<const SweepRow> rows) {
  nlohmann::ordered_json doc;
  doc["format"] = "scribetok-report";
  doc["version"] = 1;
  doc["columns"] = report_columns();
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json r;
    r["representation"] = representation_tag(row.representation);
    r["delta"] = row.delta;
    r["vocab_size"] = row.vocab_size;
    r["status"] = row.absent() ? "absent" : "ok";
    r["base_vocab_size"] = row.base_vocab_size;
    if (row.absent()) {
      for (const char* k : {"samples", "merges", "compression_ratio_base", "compression_ratio_content",
                            "points_per_token", "oov_rate", "points", "base_tokens", "bpe_tokens",
                            "unknown_tokens"}) {
        r[k] = nullptr;
      }
    } else {
      const CorpusStats& s = *row.stats;
      const SampleStats t = s.totals();
      r["samples"] = s.samples();
      r["merges"] = s.merges;
      r["compression_ratio_base"] = s.compression_ratio_base;
      r["compression_ratio_content"] = s.compression_ratio_content;
      r["points_per_token"] = s.points_per_token;
      r["oov_rate"] = s.oov_rate;
      r["points"] = t.points;
      r["base_tokens"] = t.base_tokens;
      r["bpe_tokens"] = t.bpe_tokens;
      r["unknown_tokens"] = t.unknown_tokens;
    }
    doc["rows"].push_back(std::move(r));
  }
  return doc;
}

}  // namespace scribetok
