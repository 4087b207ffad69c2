#include <benchmark/benchmark.h>

#include <string>

#include "cpc/compressor.hpp"
#include "cpc/providers.hpp"
#include "cpc/rng.hpp"
#include "cpc/segmentation.hpp"

namespace {

std::string synthetic_text(std::size_t sentences, std::uint64_t seed) {
  static const std::vector<std::string> pool = {
      "harbor", "signal", "meadow", "copper", "lantern", "river",
      "timber", "saddle", "market", "quarry", "anchor",  "willow"};
  cpc::Rng rng(seed);
  std::string text;
  for (std::size_t s = 0; s < sentences; ++s) {
    const std::size_t words = 4 + rng.uniform_int(8);
    for (std::size_t w = 0; w < words; ++w) {
      std::string word = pool[rng.uniform_int(pool.size())];
      if (w == 0) word[0] = static_cast<char>(word[0] - 'a' + 'A');
      text += word;
      text += w + 1 == words ? "." : " ";
    }
    if (s + 1 < sentences) text += ' ';
  }
  return text;
}

void BM_SplitSentences(benchmark::State& state) {
  const std::string text = synthetic_text(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    auto sentences = cpc::split_sentences(text);
    benchmark::DoNotOptimize(sentences);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SplitSentences)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oN);

void BM_CountTokens(benchmark::State& state) {
  const std::string text = synthetic_text(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cpc::count_tokens(text));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CountTokens)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oN);

// The latency story: one full compression per iteration, sentence count on
// the x axis. Time should stay linear in document length.
void BM_Compress(benchmark::State& state) {
  const cpc::HashEmbedder embedder(64);
  cpc::CompressionRequest request;
  request.context =
      cpc::Document::from_text(synthetic_text(static_cast<std::size_t>(state.range(0)), 3));
  request.question = "where is the harbor market";
  request.ratio = 0.3;
  for (auto _ : state) {
    auto result = cpc::compress(request, embedder);
    benchmark::DoNotOptimize(result);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Compress)->RangeMultiplier(2)->Range(64, 2048)->Complexity(benchmark::oN);

void BM_ScoreSentences(benchmark::State& state) {
  const cpc::HashEmbedder embedder(64);
  cpc::CompressionRequest request;
  request.context =
      cpc::Document::from_text(synthetic_text(static_cast<std::size_t>(state.range(0)), 4));
  request.question = "where is the harbor market";
  request.ratio = 0.5;
  for (auto _ : state) {
    auto scored = cpc::score_sentences(request, embedder);
    benchmark::DoNotOptimize(scored);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ScoreSentences)->RangeMultiplier(2)->Range(64, 2048)->Complexity(benchmark::oN);

}  // namespace

BENCHMARK_MAIN();
