#include "conedual/wiener.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "conedual/cones.hpp"
#include "conedual/error.hpp"
#include "conedual/lp.hpp"
#include "conedual/parallel.hpp"

namespace conedual {

namespace {

void check_ln(int L, int N) {
  if (L < 2) throw std::invalid_argument("L must be >= 2");
  if (N < 1) throw std::invalid_argument("N must be >= 1");
}

// S_K(u) = Σ_{a,b : |a-b| <= K} u_a u_b = Σ_{|k|<=K} (u ⋆ ũ)(k).
double window_sum(std::span<const double> u, int K) {
  const int m = static_cast<int>(u.size());
  double s = 0.0;
  for (int a = 0; a < m; ++a) {
    if (u[static_cast<std::size_t>(a)] == 0.0) continue;
    double inner = 0.0;
    for (int b = std::max(0, a - K); b <= std::min(m - 1, a + K); ++b) inner += u[static_cast<std::size_t>(b)];
    s += u[static_cast<std::size_t>(a)] * inner;
  }
  return s;
}

double ratio_of(std::span<const double> u, int L, int N) {
  const double den = window_sum(u, N);
  if (!(den > 0.0)) return -kInfinity;
  return window_sum(u, L * N) / den - 1.0;
}

void normalize(std::vector<double>& u) {
  const double mx = *std::max_element(u.begin(), u.end());
  if (mx > 0.0) {
    for (double& v : u) v /= mx;
  }
}

struct AscentResult {
  double value;
  std::vector<double> u;
};

// One restart: cyclic coordinate ascent with golden-section line searches on
// the one-dimensional ratio of quadratics.
AscentResult coordinate_ascent(std::vector<double> u, int L, int N, std::int64_t steps, double u_max) {
  const int m = static_cast<int>(u.size());
  const int big = L * N;
  double best = ratio_of(u, L, N);
  constexpr double kInvPhi = 0.6180339887498948482;
  for (std::int64_t step = 0; step < steps; ++step) {
    const int i = static_cast<int>(step % m);
    const auto ui = static_cast<std::size_t>(i);
    // S_K(t) = A_K + 2 t B_K + t^2 with u_i = t.
    double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
    {
      std::vector<double> rest = u;
      rest[ui] = 0.0;
      a1 = window_sum(rest, big);
      a2 = window_sum(rest, N);
      for (int b = std::max(0, i - big); b <= std::min(m - 1, i + big); ++b) {
        if (b == i) continue;
        b1 += u[static_cast<std::size_t>(b)];
        if (std::abs(b - i) <= N) b2 += u[static_cast<std::size_t>(b)];
      }
    }
    auto phi = [&](double t) {
      const double den = a2 + 2.0 * t * b2 + t * t;
      if (!(den > 0.0)) return -kInfinity;
      return (a1 + 2.0 * t * b1 + t * t) / den - 1.0;
    };
    double lo = 0.0, hi = u_max;
    double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
    double f1 = phi(x1), f2 = phi(x2);
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = phi(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = phi(x1);
      }
    }
    double t_best = u[ui];
    double v_best = phi(t_best);
    for (double t : {0.0, u_max, 0.5 * (lo + hi)}) {
      const double v = phi(t);
      if (v > v_best) {
        v_best = v;
        t_best = t;
      }
    }
    if (v_best > best) {
      u[ui] = t_best;
      if (std::any_of(u.begin(), u.end(), [](double v) { return v > 0.0; })) {
        normalize(u);
        best = ratio_of(u, L, N);
      }
    }
  }
  return {best, std::move(u)};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

WienerProblem::WienerProblem(int l, int n, int r, TorusGrid g) : L(l), N(n), R(r), grid(std::move(g)) {
  check_ln(L, N);
  if (R < L * N) throw std::invalid_argument("WienerProblem: R must be >= L N");
  if (grid.dim() != 1) throw std::invalid_argument("WienerProblem: grid must be one-dimensional");
}

KUpper solve_K_upper(const WienerProblem& p, const SolverOptions& options) {
  const std::size_t nv = static_cast<std::size_t>(p.R) + 1;
  LinearProgram lp(nv, Sense::kMinimize);
  lp.objective[0] = 1.0;
  for (int k = p.N + 1; k <= p.R; ++k) {
    lp.set_bounds(static_cast<std::size_t>(k), -kInfinity, k <= p.L * p.N ? -1.0 : 0.0);
  }
  std::vector<MultiIndex> support;
  for (int k = 1; k <= p.R; ++k) support.push_back(MultiIndex{k});
  const auto reps = p.grid.symmetric_representatives();
  const auto cosines = cosine_matrix(support, p.grid, reps);
  for (std::size_t j = 0; j < reps.size(); ++j) {
    std::vector<double> row(nv);
    row[0] = 1.0;
    for (std::size_t k = 1; k < nv; ++k) row[k] = 2.0 * cosines[j * (nv - 1) + (k - 1)];
    lp.add_constraint(std::move(row), Relation::kGreaterEqual, 0.0);
  }
  if (options.lp_observer) options.lp_observer("K_upper", lp);

  const LpOutcome out = solve(lp, options.lp);
  if (out.status != LpStatus::kOptimal) {
    throw InternalSolverError("K program returned " + std::string(to_string(out.status)) +
                              " although w_{L,N} is feasible: " + out.message);
  }
  SymmetricSequence h = SymmetricSequence::from_coefficients(out.x);
  const CertifiedValue cv = in_cone_P(h, p.grid, options.eps_pd);
  const double deficit = std::max(0.0, -cv.lower_bound());
  if (deficit > 0.0) h = h.with(MultiIndex{0}, h.at_zero() + deficit);
  return KUpper{h.at_zero(), out.x[0], deficit, std::move(h), cv, out.iterations};
}

SymmetricSequence witness_w(int L, int N) {
  check_ln(L, N);
  std::vector<double> c(static_cast<std::size_t>(L * N) + 1, 0.0);
  c[0] = 2.0 * (L - 1) * N;
  for (int k = N + 1; k <= L * N; ++k) c[static_cast<std::size_t>(k)] = -1.0;
  return SymmetricSequence::from_coefficients(c);
}

SymmetricSequence autocorrelation_candidate(std::span<const double> u) {
  if (u.empty() || std::all_of(u.begin(), u.end(), [](double v) { return v == 0.0; })) {
    throw std::invalid_argument("autocorrelation_candidate: u must not be all zero");
  }
  if (std::any_of(u.begin(), u.end(), [](double v) { return !(v >= 0.0) || !std::isfinite(v); })) {
    throw std::invalid_argument("autocorrelation_candidate: u must be finite and nonnegative");
  }
  std::vector<double> f(u.size(), 0.0);
  for (std::size_t k = 0; k < u.size(); ++k) {
    for (std::size_t i = 0; i + k < u.size(); ++i) f[k] += u[i] * u[i + k];
  }
  return SymmetricSequence::from_coefficients(f);
}

double ratio(const SymmetricSequence& f, int L, int N) {
  check_ln(L, N);
  if (f.dim() != 1) throw DimensionMismatch("ratio: d = 1 only");
  auto window = [&](int K) {
    double s = 0.0;
    for (const auto& [n, v] : f.entries()) {
      if (n[0] <= K) s += (n[0] == 0 ? 1.0 : 2.0) * v;
    }
    return s;
  };
  const double den = window(N);
  if (!(den > 0.0)) throw std::invalid_argument("ratio: Σ_{|k|<=N} f(k) must be positive");
  return window(L * N) / den - 1.0;
}

std::vector<std::vector<double>> search_start_set(int L, int N, int length_cap) {
  check_ln(L, N);
  std::vector<std::vector<double>> out;
  auto add = [&](std::vector<double> u) {
    if (static_cast<int>(u.size()) > length_cap) return;
    u.resize(static_cast<std::size_t>(length_cap), 0.0);
    if (std::find(out.begin(), out.end(), u) == out.end()) out.push_back(std::move(u));
  };
  add({1.0});
  for (int len : {N + 1, L * N + 1}) add(std::vector<double>(static_cast<std::size_t>(len), 1.0));
  for (int teeth : {2, 3}) {
    for (int spacing = 1; spacing <= L * N; ++spacing) {
      std::vector<double> u(static_cast<std::size_t>((teeth - 1) * spacing + 1), 0.0);
      for (int t = 0; t < teeth; ++t) u[static_cast<std::size_t>(t * spacing)] = 1.0;
      add(std::move(u));
    }
  }
  return out;
}

CLower search_C_lower(int L, int N, const SearchOptions& options) {
  check_ln(L, N);
  if (options.budget < 0) throw std::invalid_argument("search_C_lower: negative budget");
  const int cap = options.length_cap > 0 ? options.length_cap : 8 * L * N;
  const auto starts = search_start_set(L, N, cap);

  // Evaluate the start set first; restarts then begin from the best starts
  // (in order), and from seeded random points once those run out.
  struct Candidate {
    double value;
    std::vector<double> u;
  };
  std::vector<Candidate> ranked;
  for (const auto& u : starts) ranked.push_back({ratio_of(u, L, N), u});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Candidate& a, const Candidate& b) { return a.value > b.value; });

  Candidate best = ranked.front();
  const int restarts = std::max(1, options.restarts);
  if (options.budget > 0) {
    std::vector<AscentResult> results(static_cast<std::size_t>(restarts));
    parallel_for(results.size(), options.workers, [&](std::size_t r) {
      std::vector<double> u;
      if (r < ranked.size()) {
        u = ranked[r].u;
      } else {
        std::mt19937_64 rng(mix_seed(options.seed, r));
        std::uniform_real_distribution<double> unif(0.0, options.u_max);
        std::uniform_int_distribution<int> len(1, cap);
        u.assign(static_cast<std::size_t>(cap), 0.0);
        const int active = len(rng);
        for (int i = 0; i < active; ++i) u[static_cast<std::size_t>(i)] = unif(rng);
        if (std::all_of(u.begin(), u.end(), [](double v) { return v == 0.0; })) u[0] = 1.0;
        normalize(u);
      }
      const std::int64_t steps =
          options.budget / restarts + (static_cast<std::int64_t>(r) < options.budget % restarts ? 1 : 0);
      results[r] = coordinate_ascent(std::move(u), L, N, steps, options.u_max);
    });
    for (auto& res : results) {
      if (res.value > best.value) best = {res.value, std::move(res.u)};
    }
  }

  // Trim trailing zeros; the support of u determines f.
  while (best.u.size() > 1 && best.u.back() == 0.0) best.u.pop_back();
  SymmetricSequence f = autocorrelation_candidate(best.u);
  const double value = ratio(f, L, N);
  return CLower{value, std::move(best.u), std::move(f)};
}

WienerBracket run_wiener_bracket(int L, int N, std::span<const std::pair<int, std::int64_t>> schedule,
                                 const SearchOptions& search, const SolverOptions& options, unsigned workers) {
  check_ln(L, N);
  if (schedule.empty()) throw std::invalid_argument("run_wiener_bracket: empty schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i].first < schedule[i - 1].first || schedule[i].second < schedule[i - 1].second) {
      throw std::invalid_argument("run_wiener_bracket: schedule must be nondecreasing in R and G");
    }
  }
  std::vector<WienerLevel> levels(schedule.size());
  parallel_for(schedule.size(), workers, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    const WienerProblem p(L, N, schedule[i].first, TorusGrid(1, schedule[i].second));
    KUpper k = solve_K_upper(p, options);
    levels[i] = WienerLevel{p.R, schedule[i].second, k.value, k.lp_value, k.deficit, 0.0, k.lp_iterations, 0.0,
                            std::move(k.h_star)};
    levels[i].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });

  CLower lower = search_C_lower(L, N, search);
  WienerBracket out{L, N, lower.value, kInfinity, 2.0 * (L - 1) * N, std::move(lower),
                    SymmetricSequence(1), {}, 0.0};
  out.tolerance = 2.0 * options.eps_pd * (1.0 + 2.0 * L * N) + 1e-7;
  for (auto& level : levels) {
    if (level.upper < out.upper) {
      out.upper = level.upper;
      out.upper_witness = level.h_star;
    }
    level.best_upper = out.upper;
  }
  out.levels = std::move(levels);
  if (out.lower > out.upper + out.tolerance) {
    throw SoundnessViolation("C(L,N) lower bound " + std::to_string(out.lower) + " exceeds K(L,N) upper bound " +
                             std::to_string(out.upper));
  }
  return out;
}

}  // namespace conedual
