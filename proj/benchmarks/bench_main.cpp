#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "vlmc/chain_law.hpp"
#include "vlmc/estimator.hpp"
#include "vlmc/noise_law.hpp"

using namespace vlmc;

namespace {

std::shared_ptr<const ChainLaw> t1() {
  static const auto law = std::make_shared<const ChainLaw>(
      ContextTree::parse("1 0.7 0.3\n00 0.2 0.8\n10 0.6 0.4\n"));
  return law;
}

const std::vector<Symbol>& noisy_sample(std::size_t n) {
  static std::map<std::size_t, std::vector<Symbol>> cache;
  auto& z = cache[n];
  if (z.empty()) z = perturb(t1()->sample(n, 1), PerturbationModel(0.01), 2).symbols;
  return z;
}

void BM_Sample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(t1()->sample(n, ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sample)->Arg(1'000)->Arg(100'000);

void BM_BuildCounts(benchmark::State& state) {
  const auto& z = noisy_sample(100'000);
  const auto d = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(CountTrie::build(z, d));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(z.size()));
}
BENCHMARK(BM_BuildCounts)->Arg(5)->Arg(10)->Arg(20);

void BM_EstimateTree(benchmark::State& state) {
  const auto& z = noisy_sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_tree(z, 0.06, 4));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateTree)->Arg(10'000)->Arg(100'000);

void BM_ForwardFilter(benchmark::State& state) {
  const PerturbedLaw law(t1(), PerturbationModel(0.1));
  const auto& z = noisy_sample(100'000);
  const auto len = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(law.filter({z.data(), len}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForwardFilter)->Arg(16)->Arg(4096);

void BM_Theorem1Certify(benchmark::State& state) {
  const PerturbedLaw law(t1(), PerturbationModel(0.01));
  for (auto _ : state) benchmark::DoNotOptimize(theorem1_certify(law, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Theorem1Certify)->Arg(10)->Arg(14);

}  // namespace

BENCHMARK_MAIN();
