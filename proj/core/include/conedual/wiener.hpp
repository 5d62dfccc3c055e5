#pragma once

// Brackets for C(L,N) = K(L,N): integral estimates of nonnegative positive
// definite sequences on Z.
//
//   lower: ratio(f) = Σ_{|k|<=LN} f / Σ_{|k|<=N} f - 1 for explicit f ∈ C ∩ P
//          (autocorrelations of nonnegative u), a lower bound on C(L,N);
//   upper: min h(0) over PD h with h(k) <= -1 on N < |k| <= LN and
//          h(k) <= 0 beyond, truncated at |k| <= R and certified.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "conedual/revesz.hpp"
#include "conedual/seqcore.hpp"
#include "conedual/trig.hpp"

namespace conedual {

struct WienerProblem {
  WienerProblem(int l, int n, int r, TorusGrid g);

  int L;
  int N;
  int R;  // dual support half-width, >= L N
  TorusGrid grid;
};

struct KUpper {
  double value;     // certified upper bound on K(L,N)
  double lp_value;  // grid-relaxed optimum
  double deficit;   // amount added to h(0) by certification
  SymmetricSequence h_star;
  CertifiedValue certificate;  // of the LP solution before the bump
  std::int64_t lp_iterations = 0;
};

KUpper solve_K_upper(const WienerProblem& p, const SolverOptions& options = {});

// w(0) = 2(L-1)N, w(k) = -1 for N < |k| <= LN, 0 otherwise.
SymmetricSequence witness_w(int L, int N);

// f(k) = Σ_i u(i) u(i+|k|) for u >= 0, not all zero.
SymmetricSequence autocorrelation_candidate(std::span<const double> u);

// Σ_{|k|<=LN} f(k) / Σ_{|k|<=N} f(k) - 1.
double ratio(const SymmetricSequence& f, int L, int N);

struct SearchOptions {
  std::int64_t budget = 10'000;  // coordinate line searches over all restarts
  int restarts = 16;
  int length_cap = 0;            // 0 selects 8 L N
  double u_max = 1.0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct CLower {
  double value;
  std::vector<double> u_star;
  SymmetricSequence f_star;
};

/// Multi-start coordinate ascent over u >= 0. Deterministic given the seed;
/// the returned value is exactly ratio(autocorrelation_candidate(u_star)).
CLower search_C_lower(int L, int N, const SearchOptions& options = {});

// Start set shared by all searches: (1), flat blocks, and sparse combs.
std::vector<std::vector<double>> search_start_set(int L, int N, int length_cap);

struct WienerLevel {
  int R;
  std::int64_t points_per_axis;
  double upper;       // certified K upper bound at this level
  double lp_value;
  double deficit;
  double best_upper;  // running min
  std::int64_t lp_iterations;
  double seconds = 0.0;
  SymmetricSequence h_star{1};
};

struct WienerBracket {
  int L;
  int N;
  double lower;
  double upper;
  double witness_bound;  // w_{L,N}(0) = 2(L-1)N
  CLower lower_witness;
  SymmetricSequence upper_witness;
  std::vector<WienerLevel> levels;
  double tolerance;
  double width() const { return upper - lower; }
};

/// Schedule entries are (R, G) pairs and must be nondecreasing in both.
/// Throws SoundnessViolation if lower > upper + tolerance.
WienerBracket run_wiener_bracket(int L, int N, std::span<const std::pair<int, std::int64_t>> schedule,
                                 const SearchOptions& search, const SolverOptions& options = {},
                                 unsigned workers = 1);

}  // namespace conedual
