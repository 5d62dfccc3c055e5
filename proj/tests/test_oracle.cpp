#include <doctest.h>

#include <random>

#include "conedual/cones.hpp"
#include "conedual/oracle.hpp"
#include "support.hpp"

using namespace conedual;

TEST_CASE("parameter ranges") {
  CHECK(ParamRange{-1.0, 1.0, 1e-4}.count() == 20001);
  CHECK(ParamRange{0.0, 0.0, 1.0}.count() == 1);
  CHECK_THROWS(ParamRange{1.0, 0.0, 0.1}.count());
  CHECK_THROWS(ParamRange{0.0, 1.0, 0.0}.count());
}

TEST_CASE("sweep finds the closed-form minimum") {
  SweepSpec spec;
  spec.ranges = {{-1.0, 1.0, 1e-4}};
  spec.build = [](std::span<const double> a) { return SymmetricSequence::from_coefficients({1.0, a[0]}); };
  spec.objective_weights = SymmetricSequence::from_coefficients({1.0, 1.0});
  const auto one = sweep_optimize(spec, 1);
  const auto four = sweep_optimize(spec, 4);
  REQUIRE(one.best_value);
  CHECK(*one.best_value == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  CHECK(one.best_point[0] == doctest::Approx(-0.5));
  CHECK(one.points == 20001);
  CHECK(*four.best_value == *one.best_value);
  CHECK(four.best_point == one.best_point);
}

TEST_CASE("sweep reports an empty feasible region") {
  SweepSpec spec;
  spec.ranges = {{0.0, 0.5, 1e-3}};
  spec.build = [](std::span<const double> h) { return SymmetricSequence::from_coefficients({h[0], 0.0, -1.0}); };
  spec.objective_weights = SymmetricSequence::delta(1);
  const auto out = sweep_optimize(spec);
  CHECK_FALSE(out.best_value);
  CHECK(out.best_point.empty());
}

TEST_CASE("sweep size cap") {
  SweepSpec spec;
  spec.ranges = {{0.0, 1.0, 1e-5}, {0.0, 1.0, 1e-5}};
  spec.build = [](std::span<const double>) { return SymmetricSequence::delta(1); };
  CHECK_THROWS_AS(sweep_optimize(spec), SweepCapExceeded);
  spec.ranges = {{0.0, 1.0, 0.5}};
  spec.cap = 2;
  CHECK_THROWS_AS(sweep_optimize(spec), SweepCapExceeded);
}

TEST_CASE("Toeplitz sections") {
  CHECK(toeplitz_necessary_check(SymmetricSequence::delta(1), 5));
  const auto h = SymmetricSequence::from_coefficients({1.0, 0.6});
  CHECK(toeplitz_necessary_check(h, 1));
  CHECK_FALSE(toeplitz_necessary_check(h, 8));
  CHECK(is_positive_definite(h, TorusGrid(1, 256)).is_refuted());
  CHECK_FALSE(toeplitz_necessary_check(SymmetricSequence::from_coefficients({1.0, 2.0}), 1));
}

TEST_CASE("certified sequences pass every Toeplitz section") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int certified = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto h = testing::random_sequence_1d(rng, 1 + trial % 7);
    h = h.with(MultiIndex({0}), h.l1_norm() * u(rng) * 1.5);
    const auto s = is_positive_definite(h, TorusGrid(1, 512));
    if (!s.is_certified()) continue;
    ++certified;
    for (int m = 1; m <= 2 * h.support_radius(); ++m) CHECK(toeplitz_necessary_check(h, m));
  }
  CHECK(certified > 30);
}

TEST_CASE("coefficient builder agrees with the sequence builder") {
  SweepSpec a;
  a.ranges = {{0.0, 3.0, 0.01}, {-1.5, 1.5, 0.01}};
  a.build = [](std::span<const double> h) { return SymmetricSequence::from_coefficients({h[0], h[1], -0.7}); };
  a.objective_weights = SymmetricSequence::from_coefficients({1.0, 0.25});
  a.grid_points = 1024;
  SweepSpec b = a;
  b.build = nullptr;
  b.build_coefficients = [](std::span<const double> h, std::vector<double>& c) { c = {h[0], h[1], -0.7}; };
  const auto ra = sweep_optimize(a);
  const auto rb = sweep_optimize(b);
  REQUIRE(ra.best_value);
  REQUIRE(rb.best_value);
  CHECK(*ra.best_value == *rb.best_value);
  CHECK(ra.best_point == rb.best_point);
  b.build_coefficients = nullptr;
  CHECK_THROWS_AS(sweep_optimize(b), std::invalid_argument);
}
