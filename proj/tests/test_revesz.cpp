#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "conedual/cones.hpp"
#include "conedual/oracle.hpp"
#include "conedual/revesz.hpp"
#include "support.hpp"

using namespace conedual;

namespace {

ReveszProblem closed_form(std::int64_t g, int window = 32) {
  return make_revesz_problem(SignSupportPattern(IndexSet::of_integers({1}), IndexSet::of_integers({1})),
                             SymmetricSequence::from_coefficients({1.0, 1.0}), window, TorusGrid(1, g));
}

}  // namespace

TEST_CASE("problem construction") {
  const auto p = closed_form(64, 3);
  CHECK(p.window.size() == 3);  // positive representatives 1..3
  CHECK_THROWS_AS(make_revesz_problem(SignSupportPattern(IndexSet(1), IndexSet(1)),
                                      SymmetricSequence::from_coefficients({0.5}), std::nullopt, TorusGrid(1, 16)),
                  std::invalid_argument);
}

TEST_CASE("empty pattern is exact") {
  const auto p = make_revesz_problem(SignSupportPattern(IndexSet(1), IndexSet(1)),
                                     SymmetricSequence::from_coefficients({1.0, 0.3, -0.2}), std::nullopt,
                                     TorusGrid(1, 256));
  const auto a = solve_alpha_relaxed(p);
  const auto o = solve_omega_relaxed(p);
  CHECK(a.value == 1.0);
  CHECK(o.value == 1.0);
  const auto ac = certify_alpha(p, a.f_star, a.value);
  const auto oc = certify_omega(p, o.value, o.t_star, o.h_star);
  CHECK(ac.value == 1.0);
  CHECK(oc.value == 1.0);
}

TEST_CASE("closed-form instance agrees with a one-parameter sweep") {
  // Oracle: f = (1, a), a on a 1e-4 lattice, objective <f, r> = 1 + 2a.
  SweepSpec spec;
  spec.ranges = {{-1.0, 1.0, 1e-4}};
  spec.build = [](std::span<const double> a) { return SymmetricSequence::from_coefficients({1.0, a[0]}); };
  spec.objective_weights = SymmetricSequence::from_coefficients({1.0, 1.0});
  spec.grid_points = 1024;
  const auto oracle = sweep_optimize(spec);
  REQUIRE(oracle.best_value);
  CHECK(*oracle.best_value == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  CHECK(oracle.best_point[0] == doctest::Approx(-0.5));

  const auto p = closed_form(1024);
  const auto a = solve_alpha_relaxed(p);
  const auto ac = certify_alpha(p, a.f_star, a.value);
  CHECK(a.value <= *oracle.best_value + 1e-9);
  CHECK(ac.value >= *oracle.best_value - 1e-9);
  CHECK(ac.value - *oracle.best_value <= 1e-6);

  // The finite-window dual optimum is 1 - 1/cos(π/(W+2)); the relaxation
  // sits above it and the certificate below.
  SolverOptions opts;
  opts.exchange_rounds = 3;
  const auto q = closed_form(4096);
  const auto o = solve_omega_relaxed(q, opts);
  const auto oc = certify_omega(q, o.value, o.t_star, o.h_star, opts);
  const double exact = 1.0 - 1.0 / std::cos(std::numbers::pi / 34.0);
  CHECK(o.value >= exact - 1e-9);
  CHECK(oc.value <= exact + 1e-9);
  CHECK(oc.value >= exact - 1e-4);
}

TEST_CASE("witnesses satisfy their cone constraints") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = testing::random_revesz_problem(rng, 256);
    const auto a = solve_alpha_relaxed(p);
    const auto ac = certify_alpha(p, a.f_star, a.value);
    CHECK(in_cone_C(ac.witness, p.pattern));
    CHECK(ac.witness.at_zero() == 1.0);
    CHECK(in_cone_P(ac.witness, TorusGrid(1, 1024)).lower_bound() >= -kDefaultEpsPd * (1 + ac.witness.l1_norm()));
    CHECK(ac.value >= a.value);

    const auto o = solve_omega_relaxed(p);
    const auto oc = certify_omega(p, o.value, o.t_star, o.h_star);
    CHECK(in_polar_cone_Cminus(oc.t, p.pattern));
    CHECK(oc.t.at_zero() == 0.0);
    const auto dh = oc.h - (p.r + oc.t - SymmetricSequence::delta(1).scaled(oc.value));
    CHECK(dh.l1_norm() <= 1e-12 * (1.0 + p.r.l1_norm() + oc.t.l1_norm()));
    CHECK(is_positive_definite(oc.h, TorusGrid(1, 1024)).certified.lower_bound() >=
          -kDefaultEpsPd * (1 + oc.h.l1_norm()));
    CHECK(oc.value <= o.value);
  }
}

TEST_CASE("weak duality on random instances") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = testing::random_revesz_problem(rng, 256);
    const std::int64_t schedule[] = {64, 256};
    const auto b = run_bracket(p, schedule);
    for (const auto& level : b.levels) CHECK(level.omega_certified <= level.alpha_certified + 1e-6);
  }
}

TEST_CASE("grid refinement moves relaxed values monotonically") {
  std::mt19937_64 rng(107);
  SolverOptions opts;
  opts.exchange_rounds = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::random_revesz_problem(rng, 64);
    double prev_alpha = -INFINITY;
    double prev_omega = INFINITY;
    for (std::int64_t g : {64, 128, 256, 512}) {
      const auto level = p.with_grid(TorusGrid(1, g));
      const double a = solve_alpha_relaxed(level, opts).value;
      const double o = solve_omega_relaxed(level, opts).value;
      CHECK(a >= prev_alpha - 1e-8);
      CHECK(o <= prev_omega + 1e-8);
      prev_alpha = a;
      prev_omega = o;
    }
  }
}

TEST_CASE("certification formulas") {
  const auto p = closed_form(64, 2);
  // f* = (1, -0.6) dips to -0.2 at π.
  const auto f = SymmetricSequence::from_coefficients({1.0, -0.6});
  const auto ac = certify_alpha(p, f, 1.0 - 1.2);
  REQUIRE(ac.deficit > 0.0);
  CHECK(ac.value == doctest::Approx((-0.2 + ac.deficit) / (1.0 + ac.deficit)));
  CHECK(ac.witness.at_zero() == 1.0);

  const auto t = SymmetricSequence(1);
  const auto h = SymmetricSequence::from_coefficients({0.5, 0.5});
  const auto oc = certify_omega(p, 0.5, t, h);
  CHECK(oc.deficit > 0.0);
  CHECK(oc.value == 0.5 - oc.deficit);
  CHECK(oc.h.at_zero() == 0.5 + oc.deficit);
}

TEST_CASE("exchange points sharpen the closed-form bracket") {
  const auto p = closed_form(256, 64);
  SolverOptions plain;
  SolverOptions exch;
  exch.exchange_rounds = 3;
  const auto o0 = solve_omega_relaxed(p, plain);
  const auto o1 = solve_omega_relaxed(p, exch);
  const auto c0 = certify_omega(p, o0.value, o0.t_star, o0.h_star);
  const auto c1 = certify_omega(p, o1.value, o1.t_star, o1.h_star);
  CHECK(o1.exchange_points > 0);
  CHECK(o1.value <= o0.value + 1e-12);
  CHECK(c1.value >= c0.value - 1e-9);
}
