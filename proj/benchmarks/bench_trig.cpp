#include <benchmark/benchmark.h>

#include <random>

#include "conedual/cones.hpp"
#include "conedual/trig.hpp"

using namespace conedual;

static SymmetricSequence random_cosine(int terms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(terms) + 1);
  for (auto& v : c) v = u(rng);
  c[0] = 2.0 * terms;
  return SymmetricSequence::from_coefficients(c);
}

static void BM_CertifiedMin1D(benchmark::State& state) {
  const auto f = random_cosine(static_cast<int>(state.range(0)), 1);
  const TorusGrid grid(1, state.range(1));
  for (auto _ : state) {
    auto cv = certified_min(f, grid);
    benchmark::DoNotOptimize(cv.grid_min);
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_CertifiedMin1D)->Args({8, 1024})->Args({64, 4096})->Args({256, 16384});

static void BM_CertifiedMin2D(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::map<MultiIndex, double> values{{MultiIndex{0, 0}, 20.0}};
  for (int a = -3; a <= 3; ++a) {
    for (int b = 0; b <= 3; ++b) {
      const MultiIndex n{a, b};
      if (n.is_positive()) values[n] = u(rng);
    }
  }
  const SymmetricSequence f(2, values);
  const TorusGrid grid(2, state.range(0));
  for (auto _ : state) {
    auto cv = certified_min(f, grid);
    benchmark::DoNotOptimize(cv.grid_min);
  }
}
BENCHMARK(BM_CertifiedMin2D)->Arg(64)->Arg(256);

static void BM_IsPositiveDefinite(benchmark::State& state) {
  const auto f = random_cosine(32, 3);
  const TorusGrid grid(1, 4096);
  for (auto _ : state) {
    auto s = is_positive_definite(f, grid);
    benchmark::DoNotOptimize(s.certified.margin);
  }
}
BENCHMARK(BM_IsPositiveDefinite);
