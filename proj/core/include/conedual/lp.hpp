#pragma once

// Deterministic dense linear programming.
//
// solve() applies a revised simplex method (explicit dense basis inverse,
// Dantzig pricing, Bland's rule after a run of degenerate pivots, and a
// perturbed right-hand side against degeneracy) to the dual
// of the canonical form min c^T x s.t. G x >= h, so the basis dimension is
// the number of variables rather than the number of constraint rows. The
// builders in this project produce a few hundred variables against thousands
// of grid rows, which is exactly the shape this favours.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace conedual {

enum class Sense { kMinimize, kMaximize };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LpTolerances {
  double feasibility = 1e-9;  // scaled primal residual accepted as OPTIMAL
  double pivot = 1e-10;
  double optimality = 1e-9;   // reduced-cost threshold
  int degenerate_pivots_before_bland = 50;
  int refactor_interval = 100;
};

struct Constraint {
  std::vector<double> coefficients;
  Relation relation;
  double rhs;
};

struct LinearProgram {
  explicit LinearProgram(std::size_t num_variables = 0, Sense sense = Sense::kMinimize);

  std::size_t num_variables() const { return objective.size(); }
  void add_constraint(std::vector<double> coefficients, Relation relation, double rhs);
  void set_bounds(std::size_t j, double lo, double hi);
  // Throws std::invalid_argument on any dimension mismatch or non-finite data.
  void validate() const;

  Sense sense;
  std::vector<double> objective;
  double objective_constant = 0.0;
  std::vector<double> lower;  // -kInfinity when absent
  std::vector<double> upper;  // +kInfinity when absent
  std::vector<Constraint> constraints;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };
std::string_view to_string(LpStatus status);

struct LpOutcome {
  LpStatus status = LpStatus::kNumericalFailure;
  // OPTIMAL only. x is projected exactly into the variable bounds.
  std::vector<double> x;
  double objective_value = 0.0;
  // One Lagrange multiplier per constraint row, in the convention
  // objective = Σ row_duals_i (row_i · x) + bound terms at optimality.
  std::vector<double> row_duals;
  double primal_residual = 0.0;  // max scaled row violation
  double duality_gap = 0.0;      // |primal - dual objective| / (1 + |primal|)
  double complementary_slackness = 0.0;
  std::int64_t iterations = 0;
  LpTolerances tolerances;
  std::string message;
};

LpOutcome solve(const LinearProgram& lp, const LpTolerances& tolerances = {});

// Plain-text fixed-layout dump for cross-checking with external solvers.
void write_lp_text(std::ostream& os, const LinearProgram& lp);

}  // namespace conedual
