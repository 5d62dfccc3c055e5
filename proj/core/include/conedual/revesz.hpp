#pragma once

// Primal/dual pair for sign-support-constrained nonnegative cosine
// polynomials:
//
//   alpha = inf { <f, r> : f ∈ C ∩ P, f(0) = 1 }
//   omega = sup { δ : r + t - δ χ_0 ∈ P⁺ for some t ∈ C⁻ }
//
// Both are discretized on a torus grid and then certified, giving
// omega_certified <= omega = alpha <= alpha_certified.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "conedual/lp.hpp"
#include "conedual/seqcore.hpp"
#include "conedual/trig.hpp"

namespace conedual {

struct SolverOptions {
  double eps_pd = kDefaultEpsPd;
  LpTolerances lp;
  // d = 1 only: after each grid solve, add the negative local minima of the
  // optimal polynomial as extra constraint points and re-solve, up to this
  // many times. 0 keeps the plain grid program.
  int exchange_rounds = 0;
  // Called with every LP before it is solved (debug dumps).
  std::function<void(std::string_view tag, const LinearProgram&)> lp_observer;
};

struct ReveszProblem {
  SignSupportPattern pattern;
  SymmetricSequence r;
  // Dual window W ∩ Z_+^d, sorted; always contains supp r and M ∪ L.
  std::vector<MultiIndex> window;
  TorusGrid grid;

  int dim() const { return r.dim(); }
  ReveszProblem with_grid(const TorusGrid& g) const;
};

// Window defaults to {n ∈ Z_+^d : |n|_inf <= 2 · max index of supp r ∪ M ∪ L}.
ReveszProblem make_revesz_problem(SignSupportPattern pattern, SymmetricSequence r,
                                  std::optional<int> window_half_width, TorusGrid grid);

struct AlphaRelaxed {
  double value;  // <= alpha
  SymmetricSequence f_star;
  std::int64_t lp_iterations = 0;
  std::size_t exchange_points = 0;
};

struct AlphaCertificate {
  double value;                 // >= alpha
  SymmetricSequence witness;    // (f* + s χ_0) / (1 + s) ∈ C ∩ P ∩ H
  double deficit = 0.0;         // s
  CertifiedValue certificate;   // of f*
};

struct OmegaRelaxed {
  double value;  // >= omega
  SymmetricSequence t_star;
  SymmetricSequence h_star;     // r + t* - δ χ_0
  std::int64_t lp_iterations = 0;
  std::size_t exchange_points = 0;
};

struct OmegaCertificate {
  double value;                 // <= omega (up to eps_pd)
  SymmetricSequence t;          // unchanged t*, in C⁻
  SymmetricSequence h;          // h* + s χ_0, PD-certified
  double deficit = 0.0;
  CertifiedValue certificate;   // of h*
};

AlphaRelaxed solve_alpha_relaxed(const ReveszProblem& p, const SolverOptions& options = {});
AlphaCertificate certify_alpha(const ReveszProblem& p, const SymmetricSequence& f_star, double value,
                               const SolverOptions& options = {});
OmegaRelaxed solve_omega_relaxed(const ReveszProblem& p, const SolverOptions& options = {});
OmegaCertificate certify_omega(const ReveszProblem& p, double delta, const SymmetricSequence& t_star,
                               const SymmetricSequence& h_star, const SolverOptions& options = {});

struct BracketLevel {
  std::int64_t points_per_axis;
  double alpha_relaxed;
  double alpha_certified;
  double omega_relaxed;
  double omega_certified;
  double gap;  // alpha_certified - omega_certified at this level
  // Running best over levels so far; best_gap is nonincreasing.
  double best_alpha_certified;
  double best_omega_certified;
  double best_gap;
  double alpha_deficit;
  double omega_deficit;
  std::int64_t lp_iterations;
  double seconds = 0.0;  // wall clock for this level
  SymmetricSequence alpha_witness{1};
  SymmetricSequence omega_t{1};
  SymmetricSequence omega_h{1};
};

struct DualityBracket {
  std::vector<BracketLevel> levels;
  double alpha_certified;  // best upper bound on alpha
  double omega_certified;  // best lower bound on omega
  double gap() const { return alpha_certified - omega_certified; }
  double tolerance;        // soundness slack used in the weak-duality assertion
};

// Weak-duality slack: 2 eps_pd (1 + ‖r‖₁) plus LP tolerance.
double weak_duality_tolerance(const ReveszProblem& p, const SolverOptions& options);

/// Runs all four steps per grid size. Throws SoundnessViolation if
/// omega_certified exceeds alpha_certified beyond the tolerance.
DualityBracket run_bracket(const ReveszProblem& p, std::span<const std::int64_t> schedule,
                           const SolverOptions& options = {}, unsigned workers = 1);

}  // namespace conedual
