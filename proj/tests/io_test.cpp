#include <random>

#include <gtest/gtest.h>

#include "scribetok/io.hpp"
#include "support/synth.hpp"

namespace scribetok {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::IoError;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

TEST(InkDocument, RoundTripIsExact) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int trial = 0; trial < 100; ++trial) {
    InkDocument doc;
    doc.ink = testing::random_handwriting(rng, 3, 10);
    for (auto& s : doc.ink.strokes) {
      for (auto& p : s) p.x += u(rng) * 1e-7;
    }
    if (trial % 2) doc.delta = 0.1 + trial;
    if (trial % 3 == 0) doc.origin = GridPoint{trial, -trial};
    EXPECT_EQ(ink_from_string(ink_to_string(doc)), doc);
  }
}

TEST(InkDocument, TableOneFixture) {
  const InkDocument doc = read_ink(SCRIBETOK_TEST_DATA "/table1.ink.json");
  EXPECT_EQ(doc.ink, (RawInk{{{{0, 0}, {1, 0}}, {{2, 1}, {4, -1}}}}));
  EXPECT_EQ(grid_ink(doc), (IntegerInk{{{{0, 0}, {1, 0}}, {{2, 1}, {4, -1}}}}));
}

TEST(InkDocument, ErrorsNameTheLocation) {
  const std::string head = R"({"format": "scribetok-ink", "version": 1, "strokes": )";
  EXPECT_EQ(code_of([&] { ink_from_string(head + "[[[0, 0]], []]}"); }), ErrorCode::ParseError);
  EXPECT_NE(message_of([&] { ink_from_string(head + "[[[0, 0]], []]}"); }).find("strokes[1]"), std::string::npos);
  EXPECT_NE(message_of([&] { ink_from_string(head + "[[[0, 0], [1, \"a\"]]]}"); }).find("strokes[0][1][1]"),
            std::string::npos);
  EXPECT_EQ(code_of([&] { ink_from_string(R"({"format": "other", "version": 1, "strokes": []})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { ink_from_string("{\n\"format\":\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { read_ink("/nonexistent/file.json"); }), ErrorCode::IoError);
}

TEST(ImportIam, TwoStrokeFixture) {
  const ImportResult r = import_iamondb(read_file(SCRIBETOK_TEST_DATA "/iam_sample.xml"));
  const RawInk expected{{
      {{1000, -2000}, {1007, -2009}, {1014, -2016}, {1021, -2019}, {1028, -2018}, {1035, -2011},
       {1042, -2002}, {1049, -1993}, {1056, -1985}, {1063, -1981}, {1070, -1981}, {1077, -1986}},
      {{1103, -1980}, {1110, -1989}, {1117, -1996}, {1124, -1999}, {1131, -1998}, {1138, -1991},
       {1145, -1982}, {1152, -1973}, {1159, -1965}, {1166, -1961}, {1173, -1961}, {1180, -1966}},
  }};
  EXPECT_EQ(r.ink, expected);
  EXPECT_EQ(r.skipped_strokes, 0u);
}

TEST(ImportIam, FlipsY) {
  const auto r = import_iamondb(R"(<S><StrokeSet><Stroke><Point x="10" y="20" time="0"/></Stroke></StrokeSet></S>)");
  EXPECT_EQ(r.ink, (RawInk{{{{10, -20}}}}));
}

TEST(ImportIam, Errors) {
  const auto bad_x = R"(<S><StrokeSet><Stroke><Point x="ten" y="20"/></Stroke></StrokeSet></S>)";
  EXPECT_EQ(code_of([&] { import_iamondb(bad_x); }), ErrorCode::ParseError);
  EXPECT_NE(message_of([&] { import_iamondb(bad_x); }).find("'x'"), std::string::npos);
  const auto no_y = R"(<S><StrokeSet><Stroke><Point x="1"/></Stroke></StrokeSet></S>)";
  EXPECT_NE(message_of([&] { import_iamondb(no_y); }).find("'y'"), std::string::npos);
  EXPECT_EQ(code_of([] { import_iamondb("<S><StrokeSet/></S>"); }), ErrorCode::EmptyInk);
  EXPECT_EQ(code_of([] { import_iamondb("<S><StrokeSet>"); }), ErrorCode::ParseError);
}

TEST(ImportIam, LenientSkipsMalformedStrokes) {
  const auto xml = R"(<S><StrokeSet>
    <Stroke><Point x="1" y="1"/></Stroke>
    <Stroke><Point x="oops" y="1"/></Stroke>
    <Stroke/>
    <Stroke><Point x="2" y="2"/></Stroke>
  </StrokeSet></S>)";
  EXPECT_EQ(code_of([&] { import_iamondb(xml); }), ErrorCode::ParseError);
  const auto r = import_iamondb(xml, {false});
  EXPECT_EQ(r.skipped_strokes, 2u);
  EXPECT_EQ(r.ink, (RawInk{{{{1, -1}}, {{2, -2}}}}));
}

TEST(RenderSvg, EmptyInk) {
  const std::string svg = render_svg(RawInk{});
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(svg.find("<path"), std::string::npos);
}

TEST(RenderSvg, OnePathPerStroke) {
  const RawInk ink{{{{0, 0}, {1, 0}}, {{2, 1}, {4, -1}}}};
  const std::string svg = render_svg(ink);
  std::size_t paths = 0;
  for (auto p = svg.find("<path"); p != std::string::npos; p = svg.find("<path", p + 1)) ++paths;
  EXPECT_EQ(paths, 2u);
  EXPECT_NE(svg.find("M2 -1 L4 1"), std::string::npos);
  EXPECT_EQ(svg, render_svg(ink));
}

TEST(RenderSvg, TokenOverlayDrawsPenInAirFaint) {
  const RawInk ink{{{{0, 0}, {1, 0}}, {{2, 1}, {4, -1}}}};
  const Vocab v = scribe_base_vocab(1.0);
  const TokenSeq ids = tokenize(quantize(ink, {1.0}), v);
  const std::string svg = render_svg(ink, TokenOverlay{ids, &v, GridPoint{0, 0}});
  // The NE step from (1,0) to (2,1) is the only faint piece.
  const auto ne = svg.find("M1 0 L2 -1");
  ASSERT_NE(ne, std::string::npos);
  const auto end = svg.find("/>", ne);
  EXPECT_NE(svg.substr(ne, end - ne).find("stroke-opacity=\"0.25\""), std::string::npos);
  std::size_t faint = 0;
  for (auto p = svg.find("stroke-opacity"); p != std::string::npos; p = svg.find("stroke-opacity", p + 1)) ++faint;
  EXPECT_EQ(faint, 1u);
}

TEST(RenderSvg, MismatchedTokensRejected) {
  const RawInk ink{{{{0, 0}, {1, 0}}}};
  const Vocab v = scribe_base_vocab(1.0);
  const TokenSeq wrong = {scribe::kDown, scribe::token_of(Direction::N), scribe::kUp};
  EXPECT_EQ(code_of([&] { render_svg(ink, TokenOverlay{wrong, &v, {}}); }), ErrorCode::ConfigMismatch);
  const Vocab t = text_base_vocab(1.0);
  EXPECT_EQ(code_of([&] { render_svg(ink, TokenOverlay{wrong, &t, {}}); }), ErrorCode::ConfigMismatch);
}

TEST(TokenFile, RoundTrip) {
  std::vector<TokenRecord> records(2);
  records[0] = {Representation::Scribe, 8.0, true, 0x0123456789abcdefull, {3, -4}, {12, 4, 13}};
  records[1] = {Representation::Text, 0.5, false, std::nullopt, {0, 0}, {}};
  const std::string text = tokens_to_string(records);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "# scribetok-tokens v1 representation=scribe delta=8 level=bpe vocab=0123456789abcdef origin=3,-4");
  EXPECT_EQ(tokens_from_string(text), records);
}

TEST(TokenFile, Errors) {
  EXPECT_EQ(code_of([] { tokens_from_string("12 4 13\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { tokens_from_string("# scribetok-tokens v1 representation=scribe\n1 x\n"); }),
            ErrorCode::ParseError);
  EXPECT_NE(message_of([] { tokens_from_string("# scribetok-tokens v1 representation=scribe\n1 x\n"); }).find("line 2"),
            std::string::npos);
  EXPECT_EQ(code_of([] { tokens_from_string("# scribetok-tokens v1 representation=foo\n1\n"); }),
            ErrorCode::ParseError);
}

}  // namespace
}  // namespace scribetok
