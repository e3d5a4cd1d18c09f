// Command-line front end. Every subcommand is a thin wrapper over the library;
// failures print one line, "error: <ErrorName>: <message>", and exit with a
// code that identifies the error kind.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scribetok/scribetok.hpp"

namespace fs = std::filesystem;
using namespace scribetok;

namespace {

// Exit codes: 0 success, 2 usage, 10 + ErrorCode for library errors.
int exit_code(ErrorCode c) { return 10 + static_cast<int>(c); }

Representation representation_arg(const std::string& tag) {
  const auto r = parse_representation(tag);
  if (!r) throw Error(ErrorCode::InvalidParams, "unknown representation '" + tag + "' (scribe|abs|rel|text)");
  return *r;
}

/// Grid ink for a document: documents that already carry a grid spacing must
/// match `delta`; raw documents are quantized.
IntegerInk grid_for(const InkDocument& doc, double delta) {
  if (doc.delta) {
    if (*doc.delta != delta) {
      throw Error(ErrorCode::ConfigMismatch, "ink is gridded at delta " + detail::format_number(*doc.delta) +
                                                 ", asked for " + detail::format_number(delta));
    }
    return grid_ink(doc);
  }
  return quantize(doc.ink, {delta});
}

/// Raw-coordinate view of a document (grid documents are scaled back).
RawInk raw_for(const InkDocument& doc) {
  if (!doc.delta) return doc.ink;
  return dequantize(grid_ink(doc), {*doc.delta});
}

std::vector<fs::path> corpus_files(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::IoError, "corpus directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorCode::EmptyInk, "no .json ink documents in " + dir);
  return files;
}

Vocab load_vocab_for(const std::string& path, Representation r, double delta) {
  Vocab v = vocab_load(path);
  if (v.representation() != r || v.delta() != delta) {
    throw Error(ErrorCode::ConfigMismatch,
                "vocabulary " + path + " is for " + std::string(representation_tag(v.representation())) +
                    " at delta " + detail::format_number(v.delta()));
  }
  return v;
}

TokenRecord single_record(const std::string& path) {
  auto records = tokens_from_string(read_file(path));
  if (records.size() != 1) {
    throw Error(ErrorCode::ParseError, path + ": expected exactly one token record, found " +
                                           std::to_string(records.size()));
  }
  return std::move(records.front());
}

void check_hash(const TokenRecord& rec, const Vocab& v) {
  if (rec.vocab_hash && *rec.vocab_hash != vocab_hash(v)) {
    throw Error(ErrorCode::ConfigMismatch, "token file was produced with a different vocabulary");
  }
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidParams, "bad number '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lossless tokenization of digital ink"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string in;
  std::string out;
  std::string repr = "scribe";
  double delta = 8.0;
  std::string vocab_path;
  bool print = false;

  // quantize
  auto* quantize_cmd = app.add_subcommand("quantize", "Snap raw ink to the integer grid");
  quantize_cmd->add_option("-i,--input", in, "Raw ink document")->required();
  quantize_cmd->add_option("-o,--output", out, "Grid ink document")->required();
  quantize_cmd->add_option("-d,--delta", delta, "Grid spacing")->capture_default_str();

  // tokenize
  auto* tokenize_cmd = app.add_subcommand("tokenize", "Ink to a token file");
  tokenize_cmd->add_option("-i,--input", in, "Ink document (raw or grid)")->required();
  tokenize_cmd->add_option("-o,--output", out, "Token file")->required();
  tokenize_cmd->add_option("-r,--repr", repr, "scribe|abs|rel|text")->capture_default_str();
  tokenize_cmd->add_option("-d,--delta", delta, "Grid spacing")->capture_default_str();
  tokenize_cmd->add_option("--vocab", vocab_path, "Vocabulary; output is BPE ids when given");
  tokenize_cmd->add_flag("--print", print, "Also print token names to stdout");

  // detokenize
  PostprocessParams post;
  bool grid_out = false;
  auto* detok_cmd = app.add_subcommand("detokenize", "Token file to ink");
  detok_cmd->add_option("-i,--input", in, "Token file")->required();
  detok_cmd->add_option("-o,--output", out, "Ink document")->required();
  detok_cmd->add_option("--vocab", vocab_path, "Vocabulary (required for BPE-level and abs/rel files)");
  detok_cmd->add_option("-w,--window", post.window, "Smoothing window")->capture_default_str();
  detok_cmd->add_option("-k,--polyorder", post.polyorder, "Smoothing polynomial order")->capture_default_str();
  detok_cmd->add_option("--downsample", post.downsample, "Keep every d-th point")->capture_default_str();
  detok_cmd->add_flag("--grid", grid_out, "Write the grid path, without scaling or post-processing");

  // bpe-train
  std::string corpus_dir;
  std::size_t size = 0;
  auto* train_cmd = app.add_subcommand("bpe-train", "Learn a BPE vocabulary from a corpus directory");
  train_cmd->add_option("-c,--corpus", corpus_dir, "Directory of ink documents")->required();
  train_cmd->add_option("-r,--repr", repr, "scribe|abs|rel|text")->capture_default_str();
  train_cmd->add_option("-d,--delta", delta, "Grid spacing")->capture_default_str();
  train_cmd->add_option("-s,--size", size, "Target vocabulary size, specials included")->required();
  train_cmd->add_option("-o,--output", out, "Vocabulary file")->required();

  // encode / decode
  auto* encode_cmd = app.add_subcommand("encode", "Apply BPE merges to a base-level token file");
  encode_cmd->add_option("-i,--input", in, "Base-level token file")->required();
  encode_cmd->add_option("-o,--output", out, "BPE-level token file")->required();
  encode_cmd->add_option("--vocab", vocab_path, "Vocabulary")->required();
  auto* decode_cmd = app.add_subcommand("decode", "Expand a BPE-level token file to base tokens");
  decode_cmd->add_option("-i,--input", in, "BPE-level token file")->required();
  decode_cmd->add_option("-o,--output", out, "Base-level token file")->required();
  decode_cmd->add_option("--vocab", vocab_path, "Vocabulary")->required();

  // stats
  std::string reprs = "scribe";
  std::string deltas = "8";
  std::string sizes = "1000";
  double eval_fraction = 0.2;
  std::string format = "csv";
  auto* stats_cmd = app.add_subcommand("stats", "Compression and OOV sweep over a corpus directory");
  stats_cmd->add_option("-c,--corpus", corpus_dir, "Directory of ink documents")->required();
  stats_cmd->add_option("-r,--repr", reprs, "Comma-separated representations")->capture_default_str();
  stats_cmd->add_option("--deltas", deltas, "Comma-separated grid spacings")->capture_default_str();
  stats_cmd->add_option("--sizes", sizes, "Comma-separated vocabulary sizes")->capture_default_str();
  stats_cmd->add_option("--eval-fraction", eval_fraction, "Share of samples held out")->capture_default_str();
  stats_cmd->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  stats_cmd->add_option("-o,--output", out, "Report file")->required();

  // import-iam
  bool lenient = false;
  auto* import_cmd = app.add_subcommand("import-iam", "Convert an IAM-OnDB stroke XML file");
  import_cmd->add_option("-i,--input", in, "XML file")->required();
  import_cmd->add_option("-o,--output", out, "Ink document")->required();
  import_cmd->add_flag("--lenient", lenient, "Skip malformed strokes instead of failing");

  // render
  std::string tokens_path;
  auto* render_cmd = app.add_subcommand("render", "Draw ink as SVG");
  render_cmd->add_option("-i,--input", in, "Ink document")->required();
  render_cmd->add_option("-o,--output", out, "SVG file")->required();
  render_cmd->add_option("--tokens", tokens_path, "Scribe token file to color by")->needs(
      render_cmd->add_option("--vocab", vocab_path, "Vocabulary of the token file"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (quantize_cmd->parsed()) {
      const InkDocument doc = read_ink(in);
      const IntegerInk grid = quantize(raw_for(doc), {delta});
      InkDocument gridded = grid_document(grid, delta);
      gridded.origin = origin_of(grid);
      write_ink(gridded, out);

    } else if (tokenize_cmd->parsed()) {
      const Representation r = representation_arg(repr);
      const IntegerInk grid = grid_for(read_ink(in), delta);
      std::optional<Vocab> vocab;
      if (!vocab_path.empty()) {
        vocab = load_vocab_for(vocab_path, r, delta);
      } else if (r == Representation::Abs || r == Representation::Rel) {
        throw Error(ErrorCode::ConfigMismatch, "abs/rel tokens need a trained --vocab");
      } else {
        vocab = base_vocab_for(r, delta, {});
      }
      TokenRecord rec;
      rec.representation = r;
      rec.delta = delta;
      rec.bpe = !vocab_path.empty();
      if (rec.bpe) rec.vocab_hash = vocab_hash(*vocab);
      rec.origin = origin_of(grid);
      rec.ids = rec.bpe ? tokenize(grid, *vocab) : encode_base(grid, *vocab);
      write_file(out, tokens_to_string(std::span(&rec, 1)));
      if (print) std::cout << render_tokens(rec.ids, *vocab) << "\n";

    } else if (detok_cmd->parsed()) {
      const TokenRecord rec = single_record(in);
      Vocab vocab;
      if (!vocab_path.empty()) {
        vocab = load_vocab_for(vocab_path, rec.representation, rec.delta);
        check_hash(rec, vocab);
      } else if (rec.bpe || rec.representation == Representation::Abs ||
                 rec.representation == Representation::Rel) {
        throw Error(ErrorCode::ConfigMismatch, "this token file needs --vocab");
      } else {
        vocab = base_vocab_for(rec.representation, rec.delta, {});
      }
      const TokenSeq base = rec.bpe ? bpe_decode(rec.ids, vocab) : rec.ids;
      const IntegerInk grid = decode_base(base, vocab, rec.origin);
      if (grid_out) {
        InkDocument doc = grid_document(grid, rec.delta);
        doc.origin = rec.origin;
        write_ink(doc, out);
      } else {
        InkDocument doc;
        doc.ink = rec.representation == Representation::Scribe
                      ? scribe_decode_pipeline(base, {rec.delta}, post, rec.origin)
                      : dequantize(grid, {rec.delta});
        write_ink(doc, out);
      }

    } else if (train_cmd->parsed()) {
      const Representation r = representation_arg(repr);
      std::vector<IntegerInk> corpus;
      for (const auto& f : corpus_files(corpus_dir)) corpus.push_back(grid_for(read_ink(f.string()), delta));
      vocab_save(train_vocab(corpus, r, delta, size), out);

    } else if (encode_cmd->parsed() || decode_cmd->parsed()) {
      const bool enc = encode_cmd->parsed();
      TokenRecord rec = single_record(in);
      const Vocab vocab = load_vocab_for(vocab_path, rec.representation, rec.delta);
      if (rec.bpe == enc) {
        throw Error(ErrorCode::ConfigMismatch,
                    std::string("token file is already at the ") + (rec.bpe ? "bpe" : "base") + " level");
      }
      if (!enc) check_hash(rec, vocab);
      rec.ids = enc ? bpe_encode(rec.ids, vocab) : bpe_decode(rec.ids, vocab);
      rec.bpe = enc;
      rec.vocab_hash = enc ? std::optional(vocab_hash(vocab)) : std::nullopt;
      write_file(out, tokens_to_string(std::span(&rec, 1)));

    } else if (stats_cmd->parsed()) {
      SweepConfig cfg;
      std::stringstream rs(reprs);
      for (std::string tag; std::getline(rs, tag, ',');) cfg.representations.push_back(representation_arg(tag));
      cfg.deltas = parse_doubles(deltas);
      for (double s : parse_doubles(sizes)) {
        if (s < 1 || s != std::floor(s)) throw Error(ErrorCode::InvalidParams, "vocabulary sizes are positive integers");
        cfg.vocab_sizes.push_back(static_cast<std::size_t>(s));
      }
      for (double d : cfg.deltas) {
        if (!(d > 0.0)) throw Error(ErrorCode::InvalidParams, "grid spacing must be positive");
      }
      std::vector<RawInk> corpus;
      for (const auto& f : corpus_files(corpus_dir)) corpus.push_back(raw_for(read_ink(f.string())));
      auto [train, eval] = split_corpus(std::move(corpus), eval_fraction);
      const auto rows = sweep(train, eval, cfg);
      write_file(out, format == "csv" ? report_csv(rows) : report_json(rows).dump(2) + "\n");

    } else if (import_cmd->parsed()) {
      const ImportResult r = import_iamondb(read_file(in), {!lenient});
      write_ink({r.ink, std::nullopt, std::nullopt}, out);
      if (r.skipped_strokes) std::cerr << "skipped " << r.skipped_strokes << " malformed strokes\n";

    } else if (render_cmd->parsed()) {
      const RawInk ink = raw_for(read_ink(in));
      if (tokens_path.empty()) {
        write_file(out, render_svg(ink));
      } else {
        const TokenRecord rec = single_record(tokens_path);
        const Vocab vocab = load_vocab_for(vocab_path, rec.representation, rec.delta);
        check_hash(rec, vocab);
        write_file(out, render_svg(ink, TokenOverlay{rec.ids, &vocab, rec.origin}));
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: IoError: " << e.what() << "\n";
    return exit_code(ErrorCode::IoError);
  }
  return 0;
}
