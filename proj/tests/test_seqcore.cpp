#include <doctest.h>

#include <random>

#include "conedual/error.hpp"
#include "conedual/seqcore.hpp"
#include "support.hpp"

using namespace conedual;

namespace {

SignSupportPattern pattern_1d(std::initializer_list<int> m, std::initializer_list<int> l) {
  return SignSupportPattern(IndexSet::of_integers(m), IndexSet::of_integers(l));
}

SignSupportPattern random_pattern(std::mt19937_64& rng, int max_index) {
  std::bernoulli_distribution coin(0.5);
  std::vector<int> m;
  std::vector<int> l;
  for (int k = 1; k <= max_index; ++k) {
    if (coin(rng)) m.push_back(k);
    if (coin(rng)) l.push_back(k);
  }
  return SignSupportPattern(IndexSet::of_integers(m), IndexSet::of_integers(l));
}

// A random element of C (when `polar` is false) or C⁻ for the pattern.
SymmetricSequence random_member(std::mt19937_64& rng, const SignSupportPattern& p, int max_index, bool polar) {
  std::uniform_real_distribution<double> mag(0.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(max_index) + 1, 0.0);
  c[0] = polar ? 0.0 : mag(rng) * 2.0 - 1.0;
  for (int k = 1; k <= max_index; ++k) {
    const double a = mag(rng);
    switch (p.classify(MultiIndex({k}))) {
      case SignClass::kFree:
        c[k] = polar ? 0.0 : 2.0 * a - 1.0;
        break;
      case SignClass::kNonnegative:
        c[k] = polar ? -a : a;
        break;
      case SignClass::kNonpositive:
        c[k] = polar ? a : -a;
        break;
      case SignClass::kOutside:
        c[k] = polar ? 2.0 * a - 1.0 : 0.0;
        break;
    }
  }
  return SymmetricSequence::from_coefficients(c);
}

}  // namespace

TEST_CASE("multi-index canonical representatives") {
  CHECK(MultiIndex({0, 3}).is_positive());
  CHECK(MultiIndex({2, -5}).is_positive());
  CHECK_FALSE(MultiIndex({-1, 4}).is_positive());
  CHECK_FALSE(MultiIndex({0, 0}).is_positive());
  CHECK(MultiIndex({-1, 4}).canonical() == MultiIndex({1, -4}));
  CHECK(parse_index_key("1,-2", 2) == MultiIndex({1, -2}));
  CHECK(format_index_key(MultiIndex({1, -2})) == "1,-2");
  CHECK_THROWS(parse_index_key("1", 2));
  CHECK_THROWS(parse_index_key("a", 1));
}

TEST_CASE("index sets reject zero and negative-half elements") {
  CHECK_THROWS_AS(IndexSet::of_integers({0}), std::invalid_argument);
  CHECK_THROWS_AS(IndexSet::of_integers({-1}), std::invalid_argument);
  const IndexSet a = IndexSet::of_integers({1, 2, 3});
  const IndexSet b = IndexSet::of_integers({2, 3, 4});
  CHECK(a.intersection(b) == IndexSet::of_integers({2, 3}));
  CHECK(a.difference(b) == IndexSet::of_integers({1}));
  CHECK(a.set_union(b) == IndexSet::of_integers({1, 2, 3, 4}));
}

TEST_CASE("symmetric sequence stores one representative per pair") {
  const SymmetricSequence s(1, {{MultiIndex({-2}), 0.5}, {MultiIndex({0}), 1.0}});
  CHECK(s.value_at(2) == 0.5);
  CHECK(s.value_at(-2) == 0.5);
  CHECK(s.value_at(7) == 0.0);
  CHECK(s.entries().size() == 2);
  CHECK(s.support_radius() == 2);
  CHECK(s.l1_norm() == doctest::Approx(2.0));
  CHECK_THROWS(SymmetricSequence(1, {{MultiIndex({1}), 1.0}, {MultiIndex({-1}), 2.0}}));
  CHECK_THROWS(SymmetricSequence(1, {{MultiIndex({1}), NAN}}));
  CHECK_THROWS_AS(SymmetricSequence(2, {{MultiIndex({1}), 1.0}}), DimensionMismatch);
}

TEST_CASE("value_at is even for random sequences") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = testing::random_sequence(rng, 2, 4, 6);
    for (const auto& [n, v] : s.entries()) {
      CHECK(s.value_at(-n) == v);
      CHECK(s.value_at(n) == v);
    }
  }
}

TEST_CASE("sign pattern partitions M ∪ L") {
  const auto p = pattern_1d({1, 2, 3}, {2, 3, 5});
  CHECK(p.free_part() == IndexSet::of_integers({2, 3}));
  CHECK(p.nonnegative_part() == IndexSet::of_integers({1}));
  CHECK(p.nonpositive_part() == IndexSet::of_integers({5}));
  CHECK(p.classify(MultiIndex({4})) == SignClass::kOutside);
  CHECK(p.classify(MultiIndex({-5})) == SignClass::kNonpositive);
}

TEST_CASE("cone C membership examples") {
  CHECK(in_cone_C(SymmetricSequence::delta(1), pattern_1d({}, {})));
  CHECK(in_cone_C(SymmetricSequence::delta(1), pattern_1d({1, 2}, {3})));
  CHECK_FALSE(in_cone_C(SymmetricSequence::from_coefficients({1.0, -0.5}), pattern_1d({1}, {})));
  CHECK(in_cone_C(SymmetricSequence::from_coefficients({1.0, -0.5}), pattern_1d({1}, {1})));
  CHECK_FALSE(in_cone_C(SymmetricSequence::from_coefficients({1.0, 0.0, 0.1}), pattern_1d({1}, {1})));
  CHECK_THROWS_AS(in_cone_C(SymmetricSequence::delta(2), pattern_1d({1}, {})), DimensionMismatch);
}

TEST_CASE("polar cone examples") {
  const auto p = pattern_1d({1}, {});
  CHECK(in_polar_cone_Cminus(SymmetricSequence(1, {}), p));
  CHECK(in_polar_cone_Cminus(SymmetricSequence::from_coefficients({0.0, -1.0}), p));
  CHECK_FALSE(in_polar_cone_Cminus(SymmetricSequence::delta(1), p));
  // χ_0 ∈ C pairs positively with itself, so it cannot lie in the polar cone.
  CHECK(pairing(SymmetricSequence::delta(1), SymmetricSequence::delta(1)) > 0.0);
  CHECK_FALSE(in_polar_cone_Cminus(SymmetricSequence::from_coefficients({0.0, 0.3}), pattern_1d({1}, {1})));
  CHECK(in_polar_cone_Cminus(SymmetricSequence::from_coefficients({0.0, 0.0, -4.0}), pattern_1d({1}, {1})));
}

TEST_CASE("pairing examples") {
  CHECK(pairing(SymmetricSequence::delta(1), SymmetricSequence::delta(1)) == 1.0);
  CHECK(pairing(SymmetricSequence::from_coefficients({1.0, 0.5}), SymmetricSequence::from_coefficients({2.0, -1.0})) ==
        1.0);
  const auto w21 = SymmetricSequence::from_coefficients({2.0, 0.0, -1.0});
  // 2·2 + (-1)(-1) at k = 2 and at k = -2.
  CHECK(pairing(w21, w21) == 6.0);
}

TEST_CASE("pairing is symmetric and bilinear") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = testing::random_sequence(rng, 2, 3, 5);
    const auto g = testing::random_sequence(rng, 2, 3, 5);
    const auto h = testing::random_sequence(rng, 2, 3, 5);
    const double a = u(rng);
    const double b = u(rng);
    CHECK(pairing(f, g) == pairing(g, f));
    const double lhs = pairing(f.scaled(a) + g.scaled(b), h);
    const double rhs = a * pairing(f, h) + b * pairing(g, h);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("C and its polar pair nonpositively") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = random_pattern(rng, 6);
    const auto f = random_member(rng, p, 8, false);
    const auto t = random_member(rng, p, 8, true);
    REQUIRE(in_cone_C(f, p));
    REQUIRE(in_polar_cone_Cminus(t, p));
    CHECK(pairing(f, t) <= 1e-12);
  }
}
