#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "conedual/lp.hpp"
#include "conedual/revesz.hpp"

using namespace conedual;

namespace {

// min h(0) s.t. h(0) + 2 Σ h(k) cos(k x_j) >= 0, h(1) = -1/2.
LinearProgram cosine_lp(int terms, int rows) {
  LinearProgram lp(static_cast<std::size_t>(terms) + 1);
  lp.objective[0] = 1.0;
  lp.set_bounds(1, -0.5, -0.5);
  for (int j = 0; j <= rows; ++j) {
    const double x = std::numbers::pi * j / rows;
    std::vector<double> row(static_cast<std::size_t>(terms) + 1, 0.0);
    row[0] = 1.0;
    for (int k = 1; k <= terms; ++k) row[static_cast<std::size_t>(k)] = 2.0 * std::cos(k * x);
    lp.add_constraint(std::move(row), Relation::kGreaterEqual, 0.0);
  }
  return lp;
}

}  // namespace

static void BM_SolveCosineLp(benchmark::State& state) {
  const auto lp = cosine_lp(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    auto out = solve(lp);
    benchmark::DoNotOptimize(out.objective_value);
  }
}
BENCHMARK(BM_SolveCosineLp)->Args({8, 128})->Args({32, 512})->Args({64, 2048})->Unit(benchmark::kMillisecond);

static void BM_ClosedFormBracketLevel(benchmark::State& state) {
  const auto p = make_revesz_problem(SignSupportPattern(IndexSet::of_integers({1}), IndexSet::of_integers({1})),
                                     SymmetricSequence::from_coefficients({1.0, 1.0}), 96,
                                     TorusGrid(1, state.range(0)));
  SolverOptions opts;
  opts.exchange_rounds = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto o = solve_omega_relaxed(p, opts);
    benchmark::DoNotOptimize(o.value);
  }
}
BENCHMARK(BM_ClosedFormBracketLevel)->Args({1024, 0})->Args({4096, 0})->Args({4096, 3})->Unit(benchmark::kMillisecond);
