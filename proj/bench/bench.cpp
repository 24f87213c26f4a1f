// Serial reference kernels against their OpenMP counterparts.
// Thread count follows OMP_NUM_THREADS.
#include <benchmark/benchmark.h>

#include <vector>

#include "marketclear/audit.hpp"
#include "marketclear/market.hpp"
#include "marketclear/market_spec.hpp"
#include "marketclear/sampler.hpp"

using namespace marketclear;

namespace {

const NestStructure& nests() {
  static const NestStructure ns(8, {{0, 1, 2}, {3, 4}, {5, 6, 7}}, {0.3, 0.6, 0.9});
  return ns;
}

const std::vector<double> kUtilities{0.5, -0.2, 0.1, 1.0, 0.0, -1.0, 0.3, 0.2};

void BM_FrequenciesSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(serial::monte_carlo_choice_frequencies(nests(), kUtilities, state.range(0), 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FrequenciesParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo_choice_frequencies(nests(), kUtilities, state.range(0), 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MomentsSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::empirical_error_moments(nests(), state.range(0), 2));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MomentsParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(empirical_error_moments(nests(), state.range(0), 2));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct MarketFixture {
  Market market;
  std::vector<double> price;
  explicit MarketFixture(std::size_t n)
      : market(generate_market({n, 5, 5, 3})), price([&] {
          SeedStream rng(9);
          return audit::uniform_vector(rng, n, 0.0, 3.0);
        }()) {}
};

void BM_EvaluateSerial(benchmark::State& state) {
  const MarketFixture f(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(serial::evaluate(f.market, f.price));
}

void BM_EvaluateParallel(benchmark::State& state) {
  const MarketFixture f(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(f.market, f.price));
}

}  // namespace

BENCHMARK(BM_FrequenciesSerial)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FrequenciesParallel)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MomentsSerial)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MomentsParallel)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EvaluateSerial)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EvaluateParallel)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();
