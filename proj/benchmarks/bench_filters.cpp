#include <benchmark/benchmark.h>

#include "alive/alive_filter.hpp"
#include "alive/baseline_filter.hpp"
#include "alive/models/iid.hpp"
#include "alive/models/linear_gaussian.hpp"

namespace {

void BM_AliveFilterIid(benchmark::State& state) {
  const auto model = alive::make_iid_uniform_model(0.3, 20);
  alive::FilterOptions o;
  o.n_alive = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(alive::run_filter(model, o, ++seed).log_gamma);
  state.SetItemsProcessed(state.iterations() * 20);
}
BENCHMARK(BM_AliveFilterIid)->Arg(100)->Arg(1000);

void BM_AliveFilterLg(benchmark::State& state) {
  const alive::LinearGaussianParams p{1.0, 1.0, 2.0, 0.0};
  const auto y = alive::lg_simulate(p, 100, 1).observations;
  const auto model = alive::make_lg_model(p, y, 1.0);
  alive::FilterOptions o;
  o.n_alive = static_cast<std::size_t>(state.range(0));
  o.lean = state.range(1) != 0;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(alive::run_filter(model, o, ++seed).log_gamma);
}
BENCHMARK(BM_AliveFilterLg)->Args({500, 0})->Args({500, 1})->Unit(benchmark::kMillisecond);

void BM_StandardFilterLg(benchmark::State& state) {
  const alive::LinearGaussianParams p{1.0, 1.0, 2.0, 0.0};
  const auto y = alive::lg_simulate(p, 100, 1).observations;
  const auto model = alive::make_lg_model(p, y, 1.0);
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(alive::run_standard_filter(model, static_cast<std::size_t>(state.range(0)), ++seed));
}
BENCHMARK(BM_StandardFilterLg)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
