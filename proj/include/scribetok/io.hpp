#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include "scribetok/bpe.hpp"
#include "scribetok/codec.hpp"
#include "scribetok/error.hpp"
#include "scribetok/ink.hpp"
#include "scribetok/scribe.hpp"

namespace scribetok {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

// ---------------------------------------------------------------------------
// Ink documents
//
//   {
//     "format": "scribetok-ink",
//     "version": 1,
//     "delta": 8.0,          optional: coordinates are grid cells at this spacing
//     "origin": [0, 0],      optional: grid point token sequences start from
//     "strokes": [
//       [[x, y], [x, y], ...],
//       ...
//     ]
//   }
//
// Coordinates are written with the shortest text that reads back to the same
// double, so a write/read cycle is exact.

inline constexpr std::string_view kInkFormat = "scribetok-ink";
inline constexpr int kInkVersion = 1;

struct InkDocument {
  RawInk ink;
  std::optional<double> delta;
  std::optional<GridPoint> origin;
  friend bool operator==(const InkDocument&, const InkDocument&) = default;
};

inline std::string ink_to_string(const InkDocument& doc) {
  validate(doc.ink);
  std::string out = "{\n";
  out += "  \"format\": \"" + std::string(kInkFormat) + "\",\n";
  out += "  \"version\": " + std::to_string(kInkVersion) + ",\n";
  if (doc.delta) out += "  \"delta\": " + nlohmann::json(*doc.delta).dump() + ",\n";
  if (doc.origin) {
    out += "  \"origin\": [" + std::to_string(doc.origin->x) + ", " + std::to_string(doc.origin->y) + "],\n";
  }
  out += "  \"strokes\": [";
  for (std::size_t s = 0; s < doc.ink.strokes.size(); ++s) {
    out += s ? ",\n    [" : "\n    [";
    const auto& stroke = doc.ink.strokes[s];
    for (std::size_t i = 0; i < stroke.size(); ++i) {
      if (i) out += ", ";
      out += "[" + nlohmann::json(stroke[i].x).dump() + ", " + nlohmann::json(stroke[i].y).dump() + "]";
    }
    out += "]";
  }
  out += doc.ink.strokes.empty() ? "]\n" : "\n  ]\n";
  out += "}\n";
  return out;
}

namespace detail {

[[noreturn]] inline void ink_parse_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, "ink document " + where + ": " + what);
}

inline double finite_number(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) ink_parse_error(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) ink_parse_error(where, "not finite");
  return d;
}

inline std::int32_t grid_number(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number_integer()) ink_parse_error(where, "expected an integer");
  const auto i = v.get<std::int64_t>();
  if (!fits_int32(i)) ink_parse_error(where, "outside the 32-bit grid");
  return static_cast<std::int32_t>(i);
}

}  // namespace detail

inline InkDocument ink_from_string(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError,
                "ink document line " + std::to_string(detail::line_of(text, e.byte > 0 ? e.byte - 1 : 0)) +
                    ": malformed JSON");
  }
  if (!j.is_object()) detail::ink_parse_error("<root>", "expected an object");
  if (!j.contains("format") || j["format"] != kInkFormat) {
    detail::ink_parse_error("format", "expected \"scribetok-ink\"");
  }
  if (!j.contains("version") || j["version"] != kInkVersion) {
    detail::ink_parse_error("version", "unsupported version");
  }
  InkDocument doc;
  if (j.contains("delta")) {
    const double d = detail::finite_number(j["delta"], "delta");
    if (!(d > 0.0)) detail::ink_parse_error("delta", "must be positive");
    doc.delta = d;
  }
  if (j.contains("origin")) {
    const auto& o = j["origin"];
    if (!o.is_array() || o.size() != 2) detail::ink_parse_error("origin", "expected [x, y]");
    doc.origin = GridPoint{detail::grid_number(o[0], "origin[0]"), detail::grid_number(o[1], "origin[1]")};
  }
  if (!j.contains("strokes") || !j["strokes"].is_array()) {
    detail::ink_parse_error("strokes", "expected an array of strokes");
  }
  const auto& strokes = j["strokes"];
  doc.ink.strokes.reserve(strokes.size());
  for (std::size_t s = 0; s < strokes.size(); ++s) {
    const std::string ws = "strokes[" + std::to_string(s) + "]";
    const auto& stroke = strokes[s];
    if (!stroke.is_array()) detail::ink_parse_error(ws, "expected an array of points");
    if (stroke.empty()) detail::ink_parse_error(ws, "stroke has no points");
    Stroke& dst = doc.ink.strokes.emplace_back();
    dst.reserve(stroke.size());
    for (std::size_t i = 0; i < stroke.size(); ++i) {
      const std::string wp = ws + "[" + std::to_string(i) + "]";
      const auto& p = stroke[i];
      if (!p.is_array() || p.size() != 2) detail::ink_parse_error(wp, "expected [x, y]");
      dst.push_back({detail::finite_number(p[0], wp + "[0]"), detail::finite_number(p[1], wp + "[1]")});
    }
  }
  return doc;
}

inline InkDocument read_ink(const std::string& path) { return ink_from_string(read_file(path)); }

inline void write_ink(const InkDocument& doc, const std::string& path) {
  write_file(path, ink_to_string(doc));
}

/// Grid view of a document that already carries a grid spacing; every
/// coordinate must be integral.
inline IntegerInk grid_ink(const InkDocument& doc) {
  if (!doc.delta) throw Error(ErrorCode::ConfigMismatch, "ink document has no grid spacing");
  IntegerInk out;
  for (std::size_t s = 0; s < doc.ink.strokes.size(); ++s) {
    IntStroke& dst = out.strokes.emplace_back();
    for (const auto& p : doc.ink.strokes[s]) {
      if (p.x != std::floor(p.x) || p.y != std::floor(p.y) ||
          !detail::fits_int32(static_cast<std::int64_t>(p.x)) ||
          !detail::fits_int32(static_cast<std::int64_t>(p.y))) {
        throw Error(ErrorCode::InvalidInk,
                    "stroke " + std::to_string(s) + " has a non-integral grid coordinate");
      }
      dst.push_back({static_cast<std::int32_t>(p.x), static_cast<std::int32_t>(p.y)});
    }
  }
  validate(out);
  return out;
}

inline InkDocument grid_document(const IntegerInk& ink, double delta) {
  InkDocument doc;
  doc.delta = delta;
  for (const auto& stroke : ink.strokes) {
    Stroke& dst = doc.ink.strokes.emplace_back();
    for (const auto& p : stroke) dst.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
  }
  return doc;
}

// ---------------------------------------------------------------------------
// IAM-OnDB import

struct ImportOptions {
  /// Strict mode rejects the document on the first malformed stroke; lenient
  /// mode drops such strokes and counts them.
  bool strict = true;
};

struct ImportResult {
  RawInk ink;
  std::size_t skipped_strokes = 0;
};

namespace detail {

using boost::property_tree::ptree;

inline void collect_strokes(const ptree& node, std::vector<const ptree*>& out) {
  for (const auto& [name, child] : node) {
    if (name == "Stroke") {
      out.push_back(&child);
    } else if (name != "<xmlattr>" && name != "<xmlcomment>") {
      collect_strokes(child, out);
    }
  }
}

inline double xml_number(const ptree& point, const char* attr, const std::string& where) {
  const auto value = point.get_optional<std::string>(std::string("<xmlattr>.") + attr);
  if (!value) throw Error(ErrorCode::ParseError, where + ": missing attribute '" + attr + "'");
  std::string_view s = *value;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::ParseError,
                where + ": attribute '" + attr + "' is not numeric ('" + *value + "')");
  }
  return v;
}

}  // namespace detail

/// Reads a WhiteboardCaptureSession document: one stroke per <Stroke>, in
/// document order, from its <Point x=".." y=".."> children. Device y grows
/// downward, so y is negated. Time stamps are ignored.
inline ImportResult import_iamondb(std::string_view xml, const ImportOptions& options = {}) {
  detail::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    boost::property_tree::read_xml(in, tree);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw Error(ErrorCode::ParseError,
                "XML line " + std::to_string(e.line()) + ": " + e.message());
  }
  std::vector<const detail::ptree*> strokes;
  detail::collect_strokes(tree, strokes);

  ImportResult result;
  for (std::size_t s = 0; s < strokes.size(); ++s) {
    try {
      Stroke stroke;
      std::size_t index = 0;
      for (const auto& [name, child] : *strokes[s]) {
        if (name != "Point") continue;
        const std::string where = "Stroke " + std::to_string(s) + " Point " + std::to_string(index++);
        stroke.push_back({detail::xml_number(child, "x", where), -detail::xml_number(child, "y", where)});
      }
      if (stroke.empty()) {
        throw Error(ErrorCode::ParseError, "Stroke " + std::to_string(s) + ": no Point elements");
      }
      result.ink.strokes.push_back(std::move(stroke));
    } catch (const Error&) {
      if (options.strict) throw;
      ++result.skipped_strokes;
    }
  }
  if (result.ink.strokes.empty()) {
    throw Error(ErrorCode::EmptyInk, "document contains no usable strokes");
  }
  return result;
}

// ---------------------------------------------------------------------------
// SVG rendering

/// Tokens to color the drawing by: a ScribeTokens (BPE) sequence, its
/// vocabulary, and the grid point it starts from.
struct TokenOverlay {
  std::span<const TokenId> tokens;
  const Vocab* vocab = nullptr;
  std::optional<GridPoint> origin;
};

namespace detail {

inline std::string svg_number(double v) {
  // Millipixel resolution keeps files small and byte-stable.
  double r = std::round(v * 1000.0) / 1000.0;
  if (r == 0.0) r = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, r);
  return std::string(buf, res.ptr);
}

inline std::string token_color(TokenId id) {
  // Golden-ratio hashing of the id picks a hue; fixed saturation/lightness.
  const std::uint32_t h = static_cast<std::uint32_t>(id) * 2654435761u;
  const double hue = static_cast<double>(h % 360u);
  const double s = 0.7;
  const double l = 0.45;
  const double c = (1.0 - std::abs(2.0 * l - 1.0)) * s;
  const double x = c * (1.0 - std::abs(std::fmod(hue / 60.0, 2.0) - 1.0));
  const double m = l - c / 2.0;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hue / 60.0)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const auto byte = [m](double v) { return static_cast<int>(std::lround((v + m) * 255.0)); };
  constexpr char hex[] = "0123456789abcdef";
  std::string out = "#";
  for (int v : {byte(r), byte(g), byte(b)}) {
    out.push_back(hex[(v >> 4) & 15]);
    out.push_back(hex[v & 15]);
  }
  return out;
}

inline std::string path_data(std::span<const Point> pts) {
  std::string d;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    d += (i ? " L" : "M") + svg_number(pts[i].x) + " " + svg_number(-pts[i].y);
  }
  if (pts.size() == 1) d += " l0 0";
  return d;
}

}  // namespace detail

/// SVG 1.1 drawing of `ink`, y flipped to screen orientation. Without an
/// overlay each stroke is one black <path>. With one, every token's steps are
/// a separate <path> colored by token id, pen-in-air spans drawn faint.
inline std::string render_svg(const RawInk& ink, const std::optional<TokenOverlay>& overlay = std::nullopt) {
  validate(ink);

  struct Piece {
    std::vector<Point> points;
    std::string color;
    bool faint;
  };
  std::vector<Piece> pieces;

  if (overlay) {
    if (!overlay->vocab || overlay->vocab->representation() != Representation::Scribe) {
      throw Error(ErrorCode::ConfigMismatch, "token coloring needs a scribe vocabulary");
    }
    const Vocab& vocab = *overlay->vocab;
    const double delta = vocab.delta();
    const IntegerInk grid = quantize(ink, {delta});
    const GridPoint origin = overlay->origin.value_or(origin_of(grid));
    if (scribe_detokenize(bpe_decode(overlay->tokens, vocab), origin) != rasterize_ink(grid)) {
      throw Error(ErrorCode::ConfigMismatch, "tokens do not decode to the ink's rasterized path");
    }
    GridPoint pos = origin;
    bool down = false;
    for (const TokenId t : overlay->tokens) {
      Piece piece{{}, detail::token_color(t), !down};
      for (const TokenId b : vocab.expand(t)) {
        if (b == scribe::kDown) {
          down = true;
        } else if (b == scribe::kUp) {
          down = false;
        } else if (const auto d = scribe::direction_of_token(b)) {
          if (piece.points.empty()) piece.points.push_back({pos.x * delta, pos.y * delta});
          pos = step(pos, *d);
          piece.points.push_back({pos.x * delta, pos.y * delta});
        }
      }
      if (!piece.points.empty()) pieces.push_back(std::move(piece));
    }
  } else {
    for (const auto& stroke : ink.strokes) pieces.push_back({stroke, "#000000", false});
  }

  double minx = 0, maxx = 1, miny = 0, maxy = 1;
  bool first = true;
  for (const auto& stroke : ink.strokes) {
    for (const auto& p : stroke) {
      const double sx = p.x;
      const double sy = -p.y;
      if (first) {
        minx = maxx = sx;
        miny = maxy = sy;
        first = false;
      }
      minx = std::min(minx, sx);
      maxx = std::max(maxx, sx);
      miny = std::min(miny, sy);
      maxy = std::max(maxy, sy);
    }
  }
  const double extent = std::max({maxx - minx, maxy - miny, 1.0});
  const double margin = extent * 0.05;
  const double width = extent * 0.005 + (overlay ? overlay->vocab->delta() * 0.25 : 0.0);

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" +
         detail::svg_number(minx - margin) + " " + detail::svg_number(miny - margin) + " " +
         detail::svg_number(maxx - minx + 2 * margin) + " " + detail::svg_number(maxy - miny + 2 * margin) +
         "\">\n";
  out += "<g fill=\"none\" stroke-linecap=\"round\" stroke-linejoin=\"round\" stroke-width=\"" +
         detail::svg_number(width) + "\">\n";
  for (const auto& piece : pieces) {
    out += "<path d=\"" + detail::path_data(piece.points) + "\" stroke=\"" + piece.color + "\"";
    if (piece.faint) out += " stroke-opacity=\"0.25\" stroke-dasharray=\"" + detail::svg_number(width * 2) + "\"";
    out += "/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

// ---------------------------------------------------------------------------
// Token files
//
// Each record is a header line followed by one line of whitespace-separated
// ids:
//
//   # scribetok-tokens v1 representation=scribe delta=8 level=bpe vocab=89ab0123cdef4567 origin=0,0
//   12 4 13 5 12 11 11 13
//
// level is "base" or "bpe"; vocab is the hex vocab hash or "none".

struct TokenRecord {
  Representation representation = Representation::Scribe;
  double delta = 1.0;
  bool bpe = false;
  std::optional<std::uint64_t> vocab_hash;
  GridPoint origin;
  TokenSeq ids;
  friend bool operator==(const TokenRecord&, const TokenRecord&) = default;
};

inline std::string hash_hex(std::uint64_t h) {
  constexpr char hex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 15];
  return out;
}

inline std::string tokens_to_string(std::span<const TokenRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += "# scribetok-tokens v1 representation=" + std::string(representation_tag(r.representation)) +
           " delta=" + detail::format_number(r.delta) + " level=" + (r.bpe ? "bpe" : "base") +
           " vocab=" + (r.vocab_hash ? hash_hex(*r.vocab_hash) : "none") + " origin=" +
           std::to_string(r.origin.x) + "," + std::to_string(r.origin.y) + "\n";
    for (std::size_t i = 0; i < r.ids.size(); ++i) {
      if (i) out.push_back(' ');
      out += std::to_string(r.ids[i]);
    }
    out += "\n";
  }
  return out;
}

namespace detail {

[[noreturn]] inline void token_parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "token file line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_whole(std::string_view s, std::size_t line, const std::string& field) {
  T v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
    token_parse_error(line, "bad " + field + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace detail

inline std::vector<TokenRecord> tokens_from_string(std::string_view text) {
  std::vector<TokenRecord> records;
  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos < text.size();) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    std::string_view header = lines[i];
    if (header.empty() && i + 1 == lines.size()) break;
    constexpr std::string_view magic = "# scribetok-tokens v1";
    if (header.substr(0, magic.size()) != magic) detail::token_parse_error(lineno, "expected a record header");
    TokenRecord rec;
    bool have_repr = false;
    std::istringstream fields{std::string(header.substr(magic.size()))};
    std::string field;
    while (fields >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) detail::token_parse_error(lineno, "malformed field '" + field + "'");
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (key == "representation") {
        const auto r = parse_representation(value);
        if (!r) detail::token_parse_error(lineno, "unknown representation '" + value + "'");
        rec.representation = *r;
        have_repr = true;
      } else if (key == "delta") {
        rec.delta = detail::parse_whole<double>(value, lineno, "delta");
        if (!(rec.delta > 0.0)) detail::token_parse_error(lineno, "delta must be positive");
      } else if (key == "level") {
        if (value != "base" && value != "bpe") detail::token_parse_error(lineno, "level must be base or bpe");
        rec.bpe = value == "bpe";
      } else if (key == "vocab") {
        if (value != "none") {
          if (value.size() != 16) detail::token_parse_error(lineno, "vocab hash must be 16 hex digits");
          std::uint64_t h = 0;
          const auto r = std::from_chars(value.data(), value.data() + value.size(), h, 16);
          if (r.ec != std::errc{} || r.ptr != value.data() + value.size()) {
            detail::token_parse_error(lineno, "bad vocab hash");
          }
          rec.vocab_hash = h;
        }
      } else if (key == "origin") {
        const auto comma = value.find(',');
        if (comma == std::string::npos) detail::token_parse_error(lineno, "origin must be x,y");
        rec.origin = {detail::parse_whole<std::int32_t>(std::string_view(value).substr(0, comma), lineno, "origin"),
                      detail::parse_whole<std::int32_t>(std::string_view(value).substr(comma + 1), lineno, "origin")};
      } else {
        detail::token_parse_error(lineno, "unknown field '" + key + "'");
      }
    }
    if (!have_repr) detail::token_parse_error(lineno, "missing representation");
    if (i + 1 >= lines.size()) detail::token_parse_error(lineno, "header without a sequence line");
    ++i;
    std::istringstream ids{std::string(lines[i])};
    std::string id;
    while (ids >> id) rec.ids.push_back(detail::parse_whole<TokenId>(id, i + 1, "token id"));
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace scribetok
