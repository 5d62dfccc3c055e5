#include <benchmark/benchmark.h>

#include "conedual/wiener.hpp"

using namespace conedual;

static void BM_KUpper(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const int N = static_cast<int>(state.range(1));
  const WienerProblem p(L, N, 4 * L * N, TorusGrid(1, state.range(2)));
  for (auto _ : state) {
    auto k = solve_K_upper(p);
    benchmark::DoNotOptimize(k.value);
  }
}
BENCHMARK(BM_KUpper)->Args({2, 1, 1024})->Args({3, 2, 2048})->Args({4, 3, 4096})->Unit(benchmark::kMillisecond);

static void BM_SearchCLower(benchmark::State& state) {
  SearchOptions opts;
  opts.budget = state.range(0);
  opts.length_cap = 16;
  for (auto _ : state) {
    auto c = search_C_lower(2, 1, opts);
    benchmark::DoNotOptimize(c.value);
  }
}
BENCHMARK(BM_SearchCLower)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
