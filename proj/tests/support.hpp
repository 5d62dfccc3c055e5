#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "conedual/revesz.hpp"
#include "conedual/seqcore.hpp"

namespace testing {

using conedual::MultiIndex;
using conedual::SymmetricSequence;

// Sum over both n and -n with complex exponentials; shares nothing with
// fourier_eval beyond the sequence accessors.
inline double naive_transform(const SymmetricSequence& f, const std::vector<double>& x) {
  std::complex<double> acc = f.at_zero();
  for (const auto& [n, v] : f.entries()) {
    if (n.is_zero()) continue;
    double phase = 0.0;
    for (int i = 0; i < n.dim(); ++i) phase += n[i] * x[i];
    acc += v * std::exp(std::complex<double>(0.0, phase));
    acc += v * std::exp(std::complex<double>(0.0, -phase));
  }
  return acc.real();
}

inline double naive_transform(const SymmetricSequence& f, double x) { return naive_transform(f, std::vector<double>{x}); }

// Minimum of f̂ over {2πj/points}, d = 1.
inline double brute_min_1d(const SymmetricSequence& f, std::int64_t points) {
  double best = INFINITY;
  for (std::int64_t j = 0; j < points; ++j) {
    best = std::min(best, naive_transform(f, 2.0 * std::numbers::pi * static_cast<double>(j) / points));
  }
  return best;
}

inline SymmetricSequence random_sequence_1d(std::mt19937_64& rng, int max_index, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> c(static_cast<std::size_t>(max_index) + 1);
  for (auto& v : c) v = u(rng);
  return SymmetricSequence::from_coefficients(c);
}

inline SymmetricSequence random_sequence(std::mt19937_64& rng, int dim, int max_abs, int terms) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> c(-max_abs, max_abs);
  std::map<MultiIndex, double> values{{MultiIndex::zero(dim), u(rng)}};
  for (int k = 0; k < terms; ++k) {
    std::vector<int> coords(dim);
    for (auto& v : coords) v = c(rng);
    values[MultiIndex(coords).canonical()] = u(rng);
  }
  return SymmetricSequence(dim, values);
}

// Direct autocorrelation with both signs of the lag.
inline std::vector<double> naive_autocorrelation(const std::vector<double>& u) {
  const int m = static_cast<int>(u.size());
  std::vector<double> f(m, 0.0);
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i + k < m; ++i) f[k] += u[i] * u[i + k];
  }
  return f;
}

// |M|, |L| <= 4 inside {1..6}; r(0) = 1 and up to six random lags.
inline conedual::ReveszProblem random_revesz_problem(std::mt19937_64& rng, std::int64_t grid_points) {
  std::uniform_int_distribution<int> size(0, 4);
  std::uniform_int_distribution<int> lag(1, 6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto pick = [&] {
    std::vector<int> ks;
    const int k = size(rng);
    while (static_cast<int>(ks.size()) < k) {
      const int v = lag(rng);
      if (std::find(ks.begin(), ks.end(), v) == ks.end()) ks.push_back(v);
    }
    return conedual::IndexSet::of_integers(std::span<const int>(ks));
  };
  auto m = pick();
  auto l = pick();
  std::vector<double> r(7, 0.0);
  r[0] = 1.0;
  for (int k = 1; k <= 6; ++k) {
    if (u(rng) > 0.0) r[k] = u(rng);
  }
  return conedual::make_revesz_problem(conedual::SignSupportPattern(std::move(m), std::move(l)),
                                       SymmetricSequence::from_coefficients(r), std::nullopt,
                                       conedual::TorusGrid(1, grid_points));
}

}  // namespace testing
