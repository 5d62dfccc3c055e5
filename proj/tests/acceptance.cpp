// One line per acceptance criterion; exits 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "conedual/cones.hpp"
#include "conedual/oracle.hpp"
#include "conedual/revesz.hpp"
#include "conedual/trig.hpp"
#include "conedual/wiener.hpp"
#include "support.hpp"

#ifdef CONEDUAL_HAVE_APP
#include "conedual/app/app.hpp"
#endif

using namespace conedual;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream why;
  why << out.detail;
  if (budget_seconds > 0.0 && seconds > budget_seconds) {
    out.pass = false;
    why << " [over budget]";
  }
  if (!out.pass) ++failures;
  std::printf("[%s] %d %s (%.2fs%s) %s\n", out.pass ? "PASS" : "FAIL", id, name, seconds,
              budget_seconds > 0.0 ? (" / " + std::to_string(static_cast<int>(budget_seconds)) + "s").c_str() : "",
              why.str().c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const std::int64_t kClosedFormSchedule[] = {256, 512, 1024, 2048, 4096};

ReveszProblem closed_form_problem() {
  return make_revesz_problem(SignSupportPattern(IndexSet::of_integers({1}), IndexSet::of_integers({1})),
                             SymmetricSequence::from_coefficients({1.0, 1.0}), 96, TorusGrid(1, 4096));
}

SolverOptions closed_form_options() {
  SolverOptions o;
  o.exchange_rounds = 3;
  return o;
}

double closed_form_oracle() {
  SweepSpec spec;
  spec.ranges = {{-1.0, 1.0, 1e-4}};
  spec.build = [](std::span<const double> a) { return SymmetricSequence::from_coefficients({1.0, a[0]}); };
  spec.objective_weights = SymmetricSequence::from_coefficients({1.0, 1.0});
  spec.grid_points = 1 << 14;
  const auto r = sweep_optimize(spec);
  if (!r.best_value) throw std::runtime_error("oracle found no feasible point");
  return *r.best_value;
}

Outcome weak_duality() {
  std::mt19937_64 rng(20240601);
  const std::int64_t schedule[] = {64, 256, 1024};
  double worst = -INFINITY;
  int bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = testing::random_revesz_problem(rng, 1024);
    const auto b = run_bracket(p, schedule);
    for (const auto& l : b.levels) {
      const double excess = l.omega_certified - l.alpha_certified;
      worst = std::max(worst, excess);
      if (excess > 1e-6) ++bad;
    }
  }
  return {bad == 0, fmt("max(omega_cert - alpha_cert) = %.3e over 300 levels", worst)};
}

Outcome gap_convergence() {
  const double oracle = closed_form_oracle();
  const auto b = run_bracket(closed_form_problem(), kClosedFormSchedule, closed_form_options());
  const auto& last = b.levels.back();
  const double gap = last.alpha_certified - last.omega_certified;
  const bool ok = last.points_per_axis == 4096 && gap <= 1e-3 && std::abs(last.alpha_certified - oracle) <= 1e-3 &&
                  std::abs(last.omega_certified - oracle) <= 1e-3;
  return {ok, fmt("alpha=%.6e omega=%.6e gap=%.3e", last.alpha_certified, last.omega_certified, gap) +
                  fmt(" oracle=%.3e", oracle)};
}

Outcome trivial_exactness() {
  const auto p = make_revesz_problem(SignSupportPattern(IndexSet(1), IndexSet(1)),
                                     SymmetricSequence::from_coefficients({1.0, 0.7, -0.4}), std::nullopt,
                                     TorusGrid(1, 1024));
  const std::int64_t schedule[] = {64, 1024};
  const auto b = run_bracket(p, schedule);
  bool ok = b.alpha_certified == 1.0 && b.omega_certified == 1.0 && b.gap() == 0.0;
  for (const auto& l : b.levels) ok = ok && l.alpha_certified == 1.0 && l.omega_certified == 1.0;
  return {ok, fmt("alpha=%.17g omega=%.17g", b.alpha_certified, b.omega_certified)};
}

Outcome wiener_witness() {
  bool ok = true;
  double worst = -INFINITY;
  for (int L = 2; L <= 4; ++L) {
    for (int N = 1; N <= 3; ++N) {
      const auto s = is_positive_definite(witness_w(L, N), TorusGrid(1, 64));
      ok = ok && s.is_certified() && s.method == PdMethod::kL1Bound;
      const auto k = solve_K_upper(WienerProblem(L, N, L * N, TorusGrid(1, 1024)));
      const double excess = k.value - 2.0 * (L - 1) * N;
      worst = std::max(worst, excess);
      ok = ok && excess <= 1e-9;
    }
  }
  return {ok, fmt("max(K_upper - 2(L-1)N) = %.3e", worst)};
}

Outcome k21_bracket() {
  SweepSpec spec;
  spec.ranges = {{0.0, 4.0, 1e-3}, {-2.0, 2.0, 1e-3}};
  spec.build_coefficients = [](std::span<const double> h, std::vector<double>& c) { c = {h[0], h[1], -1.0}; };
  spec.objective_weights = SymmetricSequence::delta(1);
  spec.grid_points = 1 << 14;
  const auto oracle = sweep_optimize(spec);
  if (!oracle.best_value) return {false, "oracle found no feasible point"};

  const auto k = solve_K_upper(WienerProblem(2, 1, 2, TorusGrid(1, 4096)));
  SearchOptions search;
  search.length_cap = 16;
  const auto c = search_C_lower(2, 1, search);
  const bool ok = std::abs(k.value - 2.0) <= 1e-6 && std::abs(k.value - *oracle.best_value) <= 1e-6 &&
                  c.value >= 1.0 && c.value <= k.value && k.value <= 2.0 + 1e-6;
  return {ok, fmt("K_upper=%.12f oracle=%.6f C_lower=%.6f", k.value, *oracle.best_value, c.value)};
}

Outcome parseval() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int dim = 1 + t % 2;
    const auto f = testing::random_sequence(rng, dim, 6, 10);
    std::vector<AtomicMeasure::Atom> atoms;
    for (int a = 0; a < 1 + t % 7; ++a) {
      std::vector<double> x(dim);
      for (auto& v : x) v = angle(rng);
      atoms.push_back({std::move(x), weight(rng)});
    }
    const auto r = parseval_check(f, AtomicMeasure(dim, std::move(atoms)));
    worst = std::max(worst, std::abs(r.lhs - r.rhs) / (1.0 + std::abs(r.lhs)));
  }
  return {worst <= 1e-10, fmt("max |lhs-rhs|/(1+|lhs|) = %.3e", worst)};
}

Outcome intersection_decomposition() {
  const int L = 2;
  const int N = 1;
  const double k_up = solve_K_upper(WienerProblem(L, N, 4 * L * N, TorusGrid(1, 4096))).value;
  std::vector<double> c(static_cast<std::size_t>(L * N) + 1, -1.0);
  for (int k = 0; k <= N; ++k) c[static_cast<std::size_t>(k)] += k_up + 1.0 + 0.01;
  const auto phi = SymmetricSequence::from_coefficients(c);
  const auto d = decompose_dual(phi, L * N, TorusGrid(1, 4096));
  if (!d) return {false, "decompose_dual found nothing"};
  bool g_nonneg = true;
  for (const auto& [n, v] : d->g.entries()) g_nonneg = g_nonneg && v >= 0.0;
  const bool exact = (d->g + d->h) == phi;
  const bool ok = g_nonneg && d->h_status.is_certified() && exact;
  return {ok, fmt("K_upper=%.9f slack=%.3e", k_up, d->slack) + (exact ? " sum exact" : " sum inexact")};
}

Outcome certifier_soundness() {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int refuted = 0;
  int certified = 0;
  int bad = 0;
  for (int t = 0; t < 1000; ++t) {
    auto h = testing::random_sequence_1d(rng, 1 + t % 8);
    h = h.with(MultiIndex({0}), 2.0 * (h.l1_norm() - std::abs(h.at_zero())) * u(rng));
    const auto s = is_positive_definite(h, TorusGrid(1, 512));
    if (s.is_refuted()) {
      ++refuted;
      if (!(testing::naive_transform(h, s.certified.argmin) < 0.0)) ++bad;
    } else if (s.is_certified()) {
      ++certified;
      for (int m = 1; m <= 2 * h.support_radius(); ++m) {
        if (!toeplitz_necessary_check(h, m)) {
          ++bad;
          break;
        }
      }
    }
  }
  return {bad == 0 && refuted > 0 && certified > 0,
          fmt("refuted=%.0f certified=%.0f violations=%.0f", refuted, certified, bad)};
}

Outcome determinism() {
#ifdef CONEDUAL_HAVE_APP
  const auto cfg = app::load_config(std::filesystem::path(CONEDUAL_CONFIG_DIR) / "revesz_closed_form.json");
  const auto a = app::execute(cfg, {});
  const auto b = app::execute(cfg, {});
  const std::string da = app::deterministic_part(a.report).dump(2);
  const std::string db = app::deterministic_part(b.report).dump(2);
  const bool same = da == db && a.csv == b.csv;
  return {same, fmt("report bytes=%.0f", static_cast<double>(da.size())) + (same ? " identical" : " differ")};
#else
  const auto p = closed_form_problem();
  const auto a = run_bracket(p, kClosedFormSchedule, closed_form_options());
  const auto b = run_bracket(p, kClosedFormSchedule, closed_form_options());
  bool same = a.levels.size() == b.levels.size();
  for (std::size_t i = 0; same && i < a.levels.size(); ++i) {
    same = a.levels[i].alpha_certified == b.levels[i].alpha_certified &&
           a.levels[i].omega_certified == b.levels[i].omega_certified &&
           a.levels[i].alpha_witness == b.levels[i].alpha_witness && a.levels[i].omega_h == b.levels[i].omega_h;
  }
  return {same, same ? "bracket identical (tool not built)" : "bracket differs"};
#endif
}

}  // namespace

int main() {
  criterion(1, "weak duality on 100 random instances", 60.0, weak_duality);
  criterion(2, "closed-form gap <= 1e-3 at G=4096", 5.0, gap_convergence);
  criterion(3, "empty pattern alpha == omega == 1", 0.0, trivial_exactness);
  criterion(4, "witness PD and K_upper <= 2(L-1)N", 10.0, wiener_witness);
  criterion(5, "K(2,1) bracket against the sweep", 10.0, k21_bracket);
  criterion(6, "Parseval on 1000 pairs", 2.0, parseval);
  criterion(7, "decomposition g + h == phi", 0.0, intersection_decomposition);
  criterion(8, "certifier soundness on 1000 sequences", 0.0, certifier_soundness);
  criterion(9, "byte-identical reports", 0.0, determinism);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
