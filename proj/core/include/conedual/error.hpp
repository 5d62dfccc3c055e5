#pragma once

#include <stdexcept>
#include <string>

namespace conedual {

// Operands live in different Z^d.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A solver produced something the mathematics rules out (e.g. a weak-duality
// violation). Always a bug, never a configuration problem.
class SoundnessViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The LP layer returned a status that the problem structure makes impossible
// (e.g. the alpha program reported infeasible although chi_0 is feasible).
class InternalSolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace conedual
