// Single-threaded throughput of the two hot paths. Run with
//   ./build/bench/scribetok_bench --benchmark_counters_tabular=true
// items_per_second is points/s for tokenization and base tokens/s for BPE.

#include <benchmark/benchmark.h>

#include "scribetok/scribetok.hpp"
#include "support/synth.hpp"

namespace {

using namespace scribetok;

const std::vector<RawInk>& corpus() {
  static const auto c = testing::handwriting_corpus(99, 200, 12, 60);
  return c;
}

void BM_ScribeTokenize(benchmark::State& state) {
  const double delta = static_cast<double>(state.range(0));
  std::size_t points = 0;
  for (auto _ : state) {
    for (const auto& ink : corpus()) {
      const IntegerInk grid = quantize(ink, {delta});
      points += point_count(grid);
      benchmark::DoNotOptimize(scribe_tokenize(grid));
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(points));
}
BENCHMARK(BM_ScribeTokenize)->Arg(1)->Arg(8);

void BM_BpeEncode(benchmark::State& state) {
  std::vector<TokenSeq> seqs;
  std::vector<IntegerInk> grids;
  for (const auto& ink : corpus()) grids.push_back(quantize(ink, {2.0}));
  for (const auto& g : grids) seqs.push_back(scribe_tokenize(g));
  const Vocab vocab = bpe_train(seqs, scribe_base_vocab(2.0), static_cast<std::size_t>(state.range(0)));
  std::size_t tokens = 0;
  for (auto _ : state) {
    for (const auto& s : seqs) {
      tokens += s.size();
      benchmark::DoNotOptimize(bpe_encode(s, vocab));
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(tokens));
}
BENCHMARK(BM_BpeEncode)->Arg(1000)->Arg(10000);

void BM_BpeTrain(benchmark::State& state) {
  std::vector<TokenSeq> seqs;
  for (const auto& ink : corpus()) seqs.push_back(scribe_tokenize(quantize(ink, {2.0})));
  for (auto _ : state) benchmark::DoNotOptimize(bpe_train(seqs, scribe_base_vocab(2.0), 1000));
}
BENCHMARK(BM_BpeTrain)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
