#include <benchmark/benchmark.h>

#include <algorithm>

#include "xmr/miner.hpp"
#include "xmr/random.hpp"
#include "xmr/rules.hpp"
#include "xmr/synthetic.hpp"

namespace {

using namespace xmr;

// Image-like transactions: k visual items drawn from a skewed pool plus a
// few words, roughly the shape of pooled CNN activations.
std::vector<Transaction> image_database(std::size_t m, std::size_t k, std::size_t d, std::size_t words) {
  SplitMix64 rng(42);
  std::vector<Transaction> db(m);
  for (auto& t : db) {
    while (t.items.size() < k) {
      const auto a = rng.uniform(0, d - 1), b = rng.uniform(0, d - 1);
      const Item item = static_cast<Item>(std::min(a, b));
      if (std::find(t.items.begin(), t.items.end(), item) == t.items.end()) t.items.push_back(item);
    }
    for (std::size_t w = 0; w < words; ++w) t.items.push_back(static_cast<Item>(d + rng.uniform(0, 199)));
    std::sort(t.items.begin(), t.items.end());
    t.items.erase(std::unique(t.items.begin(), t.items.end()), t.items.end());
  }
  return db;
}

void BM_FpGrowth(benchmark::State& state) {
  const auto db = image_database(static_cast<std::size_t>(state.range(0)), 10, 256, 4);
  MineOptions options;
  options.supp_min = 3;
  options.cap = ModalityCap{256, 1};
  options.threads = static_cast<unsigned>(state.range(1));
  std::size_t found = 0;
  for (auto _ : state) {
    const auto table = mine_frequent(db, options);
    found = table.size();
    benchmark::DoNotOptimize(found);
  }
  state.counters["itemsets"] = static_cast<double>(found);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FpGrowth)->Args({1000, 1})->Args({5000, 1})->Args({20000, 1})->Args({20000, 4})->Unit(benchmark::kMillisecond);

void BM_FpGrowthUncapped(benchmark::State& state) {
  const auto db = image_database(static_cast<std::size_t>(state.range(0)), 10, 256, 4);
  MineOptions options;
  options.supp_min = 3;
  for (auto _ : state) benchmark::DoNotOptimize(mine_frequent(db, options).size());
}
BENCHMARK(BM_FpGrowthUncapped)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_BruteForce(benchmark::State& state) {
  const auto db = synthetic::random_database(1, 20, static_cast<std::size_t>(state.range(0)), 12);
  MineOptions options;
  options.supp_min = 1;
  for (auto _ : state) benchmark::DoNotOptimize(mine_frequent_bruteforce(db, options).size());
}
BENCHMARK(BM_BruteForce)->Arg(8)->Arg(12)->Arg(16);

void BM_GenerateRules(benchmark::State& state) {
  const auto db = image_database(static_cast<std::size_t>(state.range(0)), 10, 256, 4);
  MineOptions options;
  options.supp_min = 3;
  options.cap = ModalityCap{256, 1};
  const auto table = mine_frequent(db, options);
  std::vector<std::string> words;
  for (int i = 0; i < 200; ++i) words.push_back("w" + std::to_string(i));
  const Vocabulary vocab(words);
  RuleGenOptions gen;
  for (auto _ : state) benchmark::DoNotOptimize(generate_rules(table, 256, vocab, gen).size());
  state.counters["itemsets"] = static_cast<double>(table.size());
}
BENCHMARK(BM_GenerateRules)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace
