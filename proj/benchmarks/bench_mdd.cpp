#include <benchmark/benchmark.h>

#include <random>
#include <set>

#include "mnread/compiler.hpp"
#include "mnread/mdd.hpp"
#include "mnread/ngram_trie.hpp"

using namespace mnread;

namespace {

std::vector<NGram> random_ngrams(std::size_t count, std::size_t order, std::size_t vocab) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
  std::uniform_int_distribution<int> pos(0, 2);
  std::set<std::pair<int, std::vector<std::string>>> seen;
  while (seen.size() < count) {
    std::vector<std::string> w;
    for (std::size_t i = 0; i < order; ++i) w.push_back("w" + std::to_string(word(rng)));
    seen.insert({pos(rng), std::move(w)});
  }
  std::vector<NGram> out;
  for (const auto& [p, ws] : seen) {
    NGram g;
    for (const auto& w : ws) g.words.emplace_back(w);
    g.position = static_cast<Position>(p);
    out.push_back(std::move(g));
  }
  return out;
}

// 0..9 weighted layers
Mdd wide_sum(std::size_t depth) {
  std::vector<std::vector<std::int64_t>> d(depth);
  for (auto& layer : d)
    for (std::int64_t v = 0; v < 10; ++v) layer.push_back(v);
  return build_sum_mdd(d, 0, static_cast<std::int64_t>(depth) * 5);
}

}  // namespace

static void BM_TrieBuild(benchmark::State& state) {
  const auto grams = random_ngrams(static_cast<std::size_t>(state.range(0)), 5, 2000);
  for (auto _ : state) {
    auto trie = NgramTrie::build(grams);
    benchmark::DoNotOptimize(trie);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrieBuild)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_SuccessorQuery(benchmark::State& state) {
  const auto grams = random_ngrams(100000, 5, 200);
  const auto trie = NgramTrie::build(grams);
  std::vector<std::vector<std::string>> queries;
  for (std::size_t i = 0; i < 1000; ++i) {
    const auto s = grams[i * 97 % grams.size()].surfaces();
    queries.emplace_back(s.begin() + 1, s.end());
  }
  std::size_t i = 0;
  for (auto _ : state) {
    auto r = trie.successors(std::span<const std::string>(queries[i++ % queries.size()]));
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_SuccessorQuery);

static void BM_CountPaths(benchmark::State& state) {
  const Mdd m = wide_sum(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(m.count_paths());
}
BENCHMARK(BM_CountPaths)->Arg(15)->Arg(60);

static void BM_Reduce(benchmark::State& state) {
  const auto grams = random_ngrams(50000, 5, 50);
  Mdd m(5);
  for (const auto& g : grams) {
    const auto s = g.surfaces();
    m.insert(std::span<const std::string>(s));
  }
  for (auto _ : state) benchmark::DoNotOptimize(m.reduce());
}
BENCHMARK(BM_Reduce)->Unit(benchmark::kMillisecond);

static void BM_Unfold(benchmark::State& state) {
  // chain sentences over a small vocabulary: every word 5 wide
  std::vector<NGram> grams;
  const std::vector<std::string> vocab{"ab", "abc", "abcd", "a", "abcde"};
  for (std::size_t a = 0; a < vocab.size(); ++a)
    for (std::size_t b = 0; b < vocab.size(); ++b)
      for (int p = 0; p < 3; ++p) {
        NGram g;
        g.words = {Token(vocab[a]), Token(vocab[b])};
        g.position = static_cast<Position>(p);
        grams.push_back(g);
      }
  const auto trie = NgramTrie::build(grams);
  RuleConfig cfg;
  cfg.box_width = 100;
  cfg.space_width = 5;
  cfg.space_min_factor = Rational(1, 2);
  cfg.space_max_factor = Rational(2);
  FontMetrics font({}, 5);
  for (auto _ : state) {
    auto m = unfold(trie, cfg, font);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_Unfold)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
