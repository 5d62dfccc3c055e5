#pragma once

// Cosine polynomials f̂(x) = f(0) + 2 Σ_{n ∈ Z_+^d} f(n) cos(n·x) of symmetric
// sequences, uniform torus grids, and certified global minima.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "conedual/seqcore.hpp"

namespace conedual {

inline constexpr double kDefaultEpsPd = 1e-9;

/// Uniform product grid x_j = 2πj/G on T^d (always contains 0).
class TorusGrid {
 public:
  TorusGrid(int dim, std::int64_t points_per_axis);

  int dim() const { return dim_; }
  std::int64_t points_per_axis() const { return points_per_axis_; }
  std::int64_t size() const { return size_; }
  // Every point of T^d lies within this distance of some grid point.
  double mesh_radius() const;

  std::vector<std::int64_t> axis_indices(std::int64_t flat) const;
  std::vector<double> point(std::int64_t flat) const;

  // One flat index per pair {x, -x}, in increasing flat order. Cosine
  // polynomials take equal values on both members of a pair.
  std::vector<std::int64_t> symmetric_representatives() const;

  // True when every point of `coarser` is also a point of this grid.
  bool refines(const TorusGrid& coarser) const;

 private:
  int dim_;
  std::int64_t points_per_axis_;
  std::int64_t size_;
};

enum class CertStatus { kCertifiedNonneg, kRefuted, kInconclusive };
std::string_view to_string(CertStatus status);

/// Certified statement about min f̂: the true minimum lies in
/// [grid_min - margin, grid_min].
struct CertifiedValue {
  double grid_min = 0.0;
  double margin = 0.0;
  CertStatus status = CertStatus::kInconclusive;
  double eps_pd = kDefaultEpsPd;
  // Grid point attaining grid_min (empty when no grid was evaluated).
  std::vector<double> argmin;

  double lower_bound() const { return grid_min - margin; }
  bool certified() const { return status == CertStatus::kCertifiedNonneg; }
  bool refuted() const { return status == CertStatus::kRefuted; }
};

// Derives the status from grid_min, margin and eps_pd.
CertStatus classify_certificate(double grid_min, double margin, double eps_pd);

/// Nonnegative atomic measure on T^d. Cosine synthesis only sees the
/// symmetric part, so an atom at x stands for half its weight at x and -x.
class AtomicMeasure {
 public:
  struct Atom {
    std::vector<double> point;
    double weight;
  };

  explicit AtomicMeasure(int dim) : dim_(dim) {}
  AtomicMeasure(int dim, std::vector<Atom> atoms);

  int dim() const { return dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double total_mass() const;

 private:
  int dim_;
  std::vector<Atom> atoms_;
};

double fourier_eval(const SymmetricSequence& f, std::span<const double> x);
double fourier_eval(const SymmetricSequence& f, double x);  // d = 1

// f(0) - 2 Σ |f(n)|: a global lower bound for f̂.
double l1_lower_bound(const SymmetricSequence& f);
// 2 Σ |f(n)| ‖n‖₂: a global bound on ‖∇f̂‖₂.
double gradient_bound(const SymmetricSequence& f);

// f̂ at every flat grid index listed (all of them when `indices` is empty).
std::vector<double> evaluate_on_grid(const SymmetricSequence& f, const TorusGrid& grid,
                                     std::span<const std::int64_t> indices = {});

// Row-major |indices| x |support| matrix of cos(n·x_j), computed with exact
// integer phase reduction on the grid.
std::vector<double> cosine_matrix(std::span<const MultiIndex> support, const TorusGrid& grid,
                                  std::span<const std::int64_t> indices);

/// Grid minimum with a rigorous margin from local Taylor models (first order
/// everywhere; third order with a quartic remainder in d = 1; second order
/// with a Hessian bound for d >= 2). Uses grid information only.
CertifiedValue certified_min(const SymmetricSequence& f, const TorusGrid& grid,
                             double eps_pd = kDefaultEpsPd);

SymmetricSequence synthesize_from_measure(const AtomicMeasure& measure,
                                          std::span<const MultiIndex> support);

struct ParsevalResult {
  double lhs;  // pairing(f, synthesized h)
  double rhs;  // Σ weight · f̂(atom)
};
ParsevalResult parseval_check(const SymmetricSequence& f, const AtomicMeasure& measure);

}  // namespace conedual
