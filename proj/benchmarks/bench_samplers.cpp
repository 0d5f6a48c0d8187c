#include <vector>

#include <benchmark/benchmark.h>

#include "alive/baseline_filter.hpp"
#include "alive/models/stable.hpp"
#include "alive/oracles/nb_identities.hpp"

namespace {

void BM_SampleStable(benchmark::State& state) {
  const alive::StableParams p{1.0, 1.0, 1.75};
  alive::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(alive::sample_stable(p, rng));
}
BENCHMARK(BM_SampleStable);

void BM_MultinomialResample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> w(n);
  alive::Rng rng(2);
  for (auto& x : w) x = rng.uniform() < 0.3 ? 1.0 : 0.0;
  w[0] = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(alive::multinomial_resample(w, n, rng));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_MultinomialResample)->Arg(2000);

void BM_NbIdentityMc(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(alive::nb_identity_mc(0.5, 20, 10'000, ++seed).mean);
  state.SetItemsProcessed(state.iterations() * 10'000);
}
BENCHMARK(BM_NbIdentityMc);

}  // namespace
