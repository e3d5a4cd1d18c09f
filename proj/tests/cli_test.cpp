#include <filesystem>

#include <gtest/gtest.h>

#include "scribetok/scribetok.hpp"
#include "support/run.hpp"

namespace scribetok {
namespace {

#ifdef SCRIBETOK_CLI_PATH

const std::string kCli = SCRIBETOK_CLI_PATH;
const std::string kData = SCRIBETOK_TEST_DATA;

int code(ErrorCode c) { return 10 + static_cast<int>(c); }

TEST(Cli, TableOneRoundTrip) {
  testing::Scratch tmp("cli");
  const auto tokens = tmp.path("t.tok");
  ASSERT_EQ(tmp.run(kCli, "tokenize -i " + kData + "/table1.ink.json -o " + tokens + " -d 1").status, 0);
  const auto rec = tokens_from_string(testing::slurp(tokens));
  ASSERT_EQ(rec.size(), 1u);
  EXPECT_EQ(rec[0].ids, (TokenSeq{12, 4, 13, 5, 12, 11, 11, 13}));
  EXPECT_FALSE(rec[0].bpe);

  const auto back = tmp.path("back.ink.json");
  ASSERT_EQ(tmp.run(kCli, "detokenize --grid -i " + tokens + " -o " + back).status, 0);
  const IntegerInk table{{{{0, 0}, {1, 0}}, {{2, 1}, {4, -1}}}};
  EXPECT_EQ(grid_ink(read_ink(back)), rasterize_ink(table));
}

TEST(Cli, StatsOneSampleOneRow) {
  testing::Scratch tmp("cli");
  std::filesystem::create_directories(tmp.path("corpus"));
  std::filesystem::copy_file(kData + "/corpus/a.ink.json", tmp.path("corpus/a.ink.json"));
  const auto report = tmp.path("report.csv");
  const auto r = tmp.run(kCli, "stats -c " + tmp.path("corpus") + " -r scribe --deltas 8 --sizes 64 -o " + report);
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string csv = testing::slurp(report);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_EQ(csv.substr(csv.find('\n') + 1, 17), "scribe,8,64,ok,1,");
}

TEST(Cli, BudgetBelowBaseSize) {
  testing::Scratch tmp("cli");
  const auto r = tmp.run(kCli, "bpe-train -c " + kData + "/corpus -s 10 -o " + tmp.path("v.json"));
  EXPECT_EQ(r.status, code(ErrorCode::BudgetExhausted));
  EXPECT_EQ(r.err.rfind("error: BudgetExhausted: ", 0), 0u) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, ErrorsAreNamedDistinctly) {
  testing::Scratch tmp("cli");
  const auto missing = tmp.run(kCli, "tokenize -i /nonexistent.json -o " + tmp.path("x"));
  EXPECT_EQ(missing.status, code(ErrorCode::IoError));
  EXPECT_EQ(missing.err.rfind("error: IoError: ", 0), 0u);

  const auto bad_repr = tmp.run(kCli, "tokenize -r pixels -i " + kData + "/table1.ink.json -o " + tmp.path("x"));
  EXPECT_EQ(bad_repr.status, code(ErrorCode::InvalidParams));

  const auto abs_no_vocab = tmp.run(kCli, "tokenize -r abs -i " + kData + "/table1.ink.json -o " + tmp.path("x"));
  EXPECT_EQ(abs_no_vocab.status, code(ErrorCode::ConfigMismatch));

  const auto grid_mismatch = tmp.run(kCli, "tokenize -d 8 -i " + kData + "/table1.ink.json -o " + tmp.path("x"));
  EXPECT_EQ(grid_mismatch.status, code(ErrorCode::ConfigMismatch));

  const auto flag = tmp.run(kCli, "tokenize --bogus");
  EXPECT_EQ(flag.status, 2);
}

TEST(Cli, EncodeDecodeMatchesLibrary) {
  testing::Scratch tmp("cli");
  const auto vocab = tmp.path("v.json");
  ASSERT_EQ(tmp.run(kCli, "bpe-train -c " + kData + "/corpus -d 8 -s 64 -o " + vocab).status, 0);
  const auto base = tmp.path("base.tok");
  const auto bpe = tmp.path("bpe.tok");
  const auto direct = tmp.path("direct.tok");
  const auto decoded = tmp.path("decoded.tok");
  const std::string ink = kData + "/corpus/b.ink.json";
  ASSERT_EQ(tmp.run(kCli, "tokenize -i " + ink + " -o " + base).status, 0);
  ASSERT_EQ(tmp.run(kCli, "encode -i " + base + " -o " + bpe + " --vocab " + vocab).status, 0);
  ASSERT_EQ(tmp.run(kCli, "tokenize -i " + ink + " -o " + direct + " --vocab " + vocab).status, 0);
  EXPECT_EQ(testing::slurp(bpe), testing::slurp(direct));
  ASSERT_EQ(tmp.run(kCli, "decode -i " + bpe + " -o " + decoded + " --vocab " + vocab).status, 0);
  EXPECT_EQ(testing::slurp(decoded), testing::slurp(base));

  const Vocab v = vocab_load(vocab);
  const auto rec = tokens_from_string(testing::slurp(bpe));
  const IntegerInk grid = quantize(read_ink(ink).ink, {8.0});
  EXPECT_EQ(rec.at(0).ids, tokenize(grid, v));
  EXPECT_EQ(rec.at(0).vocab_hash, vocab_hash(v));
}

TEST(Cli, RenderWithTokens) {
  testing::Scratch tmp("cli");
  const auto tokens = tmp.path("t.tok");
  const auto vocab = tmp.path("v.json");
  ASSERT_EQ(tmp.run(kCli, "bpe-train -c " + kData + "/corpus -d 1 -s 20 -o " + vocab).status, 0);
  ASSERT_EQ(tmp.run(kCli, "tokenize -d 1 --vocab " + vocab + " -i " + kData + "/table1.ink.json -o " + tokens).status, 0);
  const auto svg = tmp.path("t.svg");
  const auto r = tmp.run(kCli, "render -i " + kData + "/table1.ink.json --tokens " + tokens + " --vocab " + vocab +
                                   " -o " + svg);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(testing::slurp(svg).find("stroke-opacity"), std::string::npos);
}

TEST(Cli, ImportIam) {
  testing::Scratch tmp("cli");
  const auto out = tmp.path("iam.ink.json");
  ASSERT_EQ(tmp.run(kCli, "import-iam -i " + kData + "/iam_sample.xml -o " + out).status, 0);
  const auto doc = read_ink(out);
  EXPECT_EQ(doc.ink, import_iamondb(read_file(kData + "/iam_sample.xml")).ink);
}

#endif

}  // namespace
}  // namespace scribetok
