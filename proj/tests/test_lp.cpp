#include <doctest.h>

#include <cstring>
#include <random>
#include <sstream>

#include "conedual/lp.hpp"

using namespace conedual;

namespace {

LinearProgram one_var(Sense sense, double objective) {
  LinearProgram lp(1, sense);
  lp.objective[0] = objective;
  return lp;
}

// Brute-force optimum of a 2-variable LP over the integer-free vertex set:
// every pair of tight constraints (including bounds) is intersected.
struct Line {
  double a, b, c;  // a x + b y >= c
};

double vertex_enumeration_min(const std::vector<Line>& lines, double cx, double cy) {
  double best = INFINITY;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const double det = lines[i].a * lines[j].b - lines[i].b * lines[j].a;
      if (std::abs(det) < 1e-12) continue;
      const double x = (lines[i].c * lines[j].b - lines[i].b * lines[j].c) / det;
      const double y = (lines[i].a * lines[j].c - lines[i].c * lines[j].a) / det;
      bool ok = true;
      for (const auto& l : lines) ok = ok && l.a * x + l.b * y >= l.c - 1e-9;
      if (ok) best = std::min(best, cx * x + cy * y);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("textbook cases") {
  auto lp = one_var(Sense::kMinimize, 1.0);
  lp.add_constraint({1.0}, Relation::kGreaterEqual, 1.0);
  const auto opt = solve(lp);
  REQUIRE(opt.status == LpStatus::kOptimal);
  CHECK(opt.x[0] == doctest::Approx(1.0));
  CHECK(opt.objective_value == doctest::Approx(1.0));

  auto inf = one_var(Sense::kMinimize, 0.0);
  inf.add_constraint({1.0}, Relation::kGreaterEqual, 1.0);
  inf.add_constraint({1.0}, Relation::kLessEqual, 0.0);
  CHECK(solve(inf).status == LpStatus::kInfeasible);

  auto unb = one_var(Sense::kMinimize, -1.0);
  unb.add_constraint({1.0}, Relation::kGreaterEqual, 0.0);
  CHECK(solve(unb).status == LpStatus::kUnbounded);
}

TEST_CASE("zero objective on a boundary-only feasible set") {
  auto lp = one_var(Sense::kMinimize, 0.0);
  lp.add_constraint({1.0}, Relation::kLessEqual, 0.0);
  const auto out = solve(lp);
  REQUIRE(out.status == LpStatus::kOptimal);
  CHECK(out.x[0] <= 1e-12);
}

TEST_CASE("equalities, bounds and maximization") {
  // max x + 2y s.t. x + y = 3, 0 <= x <= 2, 0 <= y <= 2.5 → x = 0.5, y = 2.5, value 5.5
  LinearProgram lp(2, Sense::kMaximize);
  lp.objective = {1.0, 2.0};
  lp.set_bounds(0, 0.0, 2.0);
  lp.set_bounds(1, 0.0, 2.5);
  lp.add_constraint({1.0, 1.0}, Relation::kEqual, 3.0);
  const auto out = solve(lp);
  REQUIRE(out.status == LpStatus::kOptimal);
  CHECK(out.x[0] == doctest::Approx(0.5));
  CHECK(out.x[1] == doctest::Approx(2.5));
  CHECK(out.objective_value == doctest::Approx(5.5));
  CHECK(out.primal_residual <= 1e-9);
  CHECK(out.tolerances.feasibility == 1e-9);
}

TEST_CASE("malformed programs are rejected before solving") {
  LinearProgram lp(2);
  CHECK_THROWS_AS(lp.add_constraint({1.0}, Relation::kEqual, 1.0), std::invalid_argument);
  lp.objective[0] = NAN;
  CHECK_THROWS_AS(solve(lp), std::invalid_argument);
}

TEST_CASE("random 2-variable programs match vertex enumeration") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    // Box keeps everything bounded.
    std::vector<Line> lines{{1, 0, -5}, {-1, 0, -5}, {0, 1, -5}, {0, -1, -5}};
    LinearProgram lp(2);
    lp.objective = {u(rng), u(rng)};
    lp.set_bounds(0, -5.0, 5.0);
    lp.set_bounds(1, -5.0, 5.0);
    for (int k = 0; k < 6; ++k) {
      const Line l{u(rng), u(rng), u(rng) * 2.0 - 1.0};
      lines.push_back(l);
      lp.add_constraint({l.a, l.b}, Relation::kGreaterEqual, l.c);
    }
    const double oracle = vertex_enumeration_min(lines, lp.objective[0], lp.objective[1]);
    const auto out = solve(lp);
    if (std::isinf(oracle)) {
      CHECK(out.status == LpStatus::kInfeasible);
      continue;
    }
    REQUIRE(out.status == LpStatus::kOptimal);
    CHECK(out.objective_value == doctest::Approx(oracle).epsilon(1e-8).scale(1.0));
    CHECK(out.primal_residual <= 1e-9);
    CHECK(out.duality_gap <= 1e-7);
    CHECK(out.complementary_slackness <= 1e-7);
    ++compared;
  }
  CHECK(compared > 100);
}

TEST_CASE("degenerate programs terminate and are deterministic") {
  // Many constraints through the optimal vertex: a cosine program with rhs 0.
  const int n = 40;
  const int rows = 400;
  LinearProgram lp(n + 1);
  lp.objective[0] = 1.0;
  for (int j = 0; j < rows; ++j) {
    const double x = 2.0 * 3.141592653589793 * j / rows;
    std::vector<double> row(n + 1);
    row[0] = 1.0;
    for (int k = 1; k <= n; ++k) row[k] = 2.0 * std::cos(k * x);
    lp.add_constraint(std::move(row), Relation::kGreaterEqual, 0.0);
  }
  const auto a = solve(lp);
  const auto b = solve(lp);
  REQUIRE(a.status == LpStatus::kOptimal);
  CHECK(a.objective_value == doctest::Approx(0.0).scale(1.0));
  CHECK(std::memcmp(a.x.data(), b.x.data(), a.x.size() * sizeof(double)) == 0);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("text dump lists every row") {
  LinearProgram lp(2);
  lp.objective = {1.0, -1.0};
  lp.add_constraint({1.0, 2.0}, Relation::kLessEqual, 4.0);
  lp.add_constraint({3.0, 0.0}, Relation::kGreaterEqual, -1.0);
  std::ostringstream out;
  write_lp_text(out, lp);
  const std::string text = out.str();
  CHECK(text.find("4") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') >= 4);
}
