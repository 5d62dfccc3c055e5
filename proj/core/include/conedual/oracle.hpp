#pragma once

// Brute-force verifiers used to regenerate expected values in tests:
// exhaustive parameter sweeps and a Toeplitz-section PSD test.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "conedual/seqcore.hpp"

namespace conedual {

struct ParamRange {
  double lo;
  double hi;
  double step;
  std::int64_t count() const;
  double value(std::int64_t i) const { return lo + static_cast<double>(i) * step; }
};

enum class SweepFeasibility {
  kAlways,
  kNonnegOnGrid,  // f̂(x_j) >= -tolerance on a uniform 1-D grid
};

struct SweepSpec {
  std::vector<ParamRange> ranges;
  // Maps a parameter point to the candidate sequence.
  std::function<SymmetricSequence(std::span<const double>)> build;
  // Optional d = 1 fast path: writes f(0), f(1), ... into the vector (resized
  // by the callee). Used instead of `build` when set.
  std::function<void(std::span<const double>, std::vector<double>&)> build_coefficients;
  SweepFeasibility feasibility = SweepFeasibility::kNonnegOnGrid;
  std::int64_t grid_points = std::int64_t{1} << 14;
  double tolerance = 1e-12;
  // Objective pairing(build(p), objective_weights), minimized.
  SymmetricSequence objective_weights{1};
  std::int64_t cap = 100'000'000;  // parameter points
};

struct SweepResult {
  std::optional<double> best_value;  // empty: none feasible
  std::vector<double> best_point;
  std::int64_t points = 0;
};

class SweepCapExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive lexicographic sweep. Ties go to the first point in sweep order,
/// so the result is independent of `workers`.
SweepResult sweep_optimize(const SweepSpec& spec, unsigned workers = 1);

/// PSD test of the (order+1)x(order+1) Toeplitz section T_ij = h(|i-j|) by
/// diagonally pivoted symmetric elimination. false proves h is not positive
/// definite; true is necessary only.
bool toeplitz_necessary_check(const SymmetricSequence& h, int order, double tolerance = 1e-10);

}  // namespace conedual
