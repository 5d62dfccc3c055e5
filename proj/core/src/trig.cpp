#include "conedual/trig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "conedual/error.hpp"

namespace conedual {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::int64_t positive_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// cos/sin of 2πk/G for k in [0, G).
struct PhaseTable {
  explicit PhaseTable(std::int64_t g) : modulus(g), cos_(static_cast<std::size_t>(g)), sin_(static_cast<std::size_t>(g)) {
    for (std::int64_t k = 0; k < g; ++k) {
      const double angle = kTwoPi * static_cast<double>(k) / static_cast<double>(g);
      cos_[static_cast<std::size_t>(k)] = std::cos(angle);
      sin_[static_cast<std::size_t>(k)] = std::sin(angle);
    }
  }
  double cos(std::int64_t k) const { return cos_[static_cast<std::size_t>(k)]; }
  double sin(std::int64_t k) const { return sin_[static_cast<std::size_t>(k)]; }

  std::int64_t modulus;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

std::int64_t phase_index(const MultiIndex& n, std::span<const std::int64_t> axis, std::int64_t g) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < axis.size(); ++i) {
    acc = positive_mod(acc + static_cast<std::int64_t>(n[i]) * axis[i], g);
  }
  return acc;
}

void require_dim(const SymmetricSequence& f, const TorusGrid& grid) {
  if (f.dim() != grid.dim()) {
    throw DimensionMismatch("sequence of dimension " + std::to_string(f.dim()) +
                            " evaluated on a grid of dimension " + std::to_string(grid.dim()));
  }
}

// Minimum over |delta| <= rho of c0 + c1 δ + c2 δ²/2 + c3 δ³/6.
double cubic_min(double c0, double c1, double c2, double c3, double rho) {
  auto p = [&](double d) { return c0 + d * (c1 + d * (0.5 * c2 + d * c3 / 6.0)); };
  double best = std::min(p(-rho), p(rho));
  best = std::min(best, c0);
  // p'(δ) = c1 + c2 δ + (c3/2) δ²
  const double a = 0.5 * c3;
  const double b = c2;
  const double c = c1;
  auto consider = [&](double d) {
    if (std::abs(d) <= rho) best = std::min(best, p(d));
  };
  if (a == 0.0) {
    if (b != 0.0) consider(-c / b);
    return best;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return best;
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q != 0.0) {
    consider(q / a);
    consider(c / q);
  } else {
    consider(0.0);
  }
  return best;
}

}  // namespace

TorusGrid::TorusGrid(int dim, std::int64_t points_per_axis) : dim_(dim), points_per_axis_(points_per_axis) {
  if (dim < 1) throw std::invalid_argument("TorusGrid: dimension must be >= 1");
  if (points_per_axis < 4) throw std::invalid_argument("TorusGrid: need at least 4 points per axis");
  size_ = 1;
  for (int i = 0; i < dim; ++i) {
    if (size_ > std::numeric_limits<std::int64_t>::max() / points_per_axis) {
      throw std::invalid_argument("TorusGrid: grid too large");
    }
    size_ *= points_per_axis;
  }
}

double TorusGrid::mesh_radius() const {
  return std::numbers::pi / static_cast<double>(points_per_axis_) * std::sqrt(static_cast<double>(dim_));
}

std::vector<std::int64_t> TorusGrid::axis_indices(std::int64_t flat) const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(dim_));
  for (int i = dim_ - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = flat % points_per_axis_;
    flat /= points_per_axis_;
  }
  return out;
}

std::vector<double> TorusGrid::point(std::int64_t flat) const {
  const auto axis = axis_indices(flat);
  std::vector<double> out(axis.size());
  for (std::size_t i = 0; i < axis.size(); ++i) {
    out[i] = kTwoPi * static_cast<double>(axis[i]) / static_cast<double>(points_per_axis_);
  }
  return out;
}

std::vector<std::int64_t> TorusGrid::symmetric_representatives() const {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(size_ / 2 + 1));
  for (std::int64_t flat = 0; flat < size_; ++flat) {
    // flat index of -x
    std::int64_t neg = 0;
    std::int64_t rest = flat;
    std::int64_t weight = 1;
    for (int i = 0; i < dim_; ++i) {
      const std::int64_t j = rest % points_per_axis_;
      rest /= points_per_axis_;
      neg += positive_mod(-j, points_per_axis_) * weight;
      weight *= points_per_axis_;
    }
    if (flat <= neg) out.push_back(flat);
  }
  return out;
}

bool TorusGrid::refines(const TorusGrid& coarser) const {
  return dim_ == coarser.dim_ && points_per_axis_ % coarser.points_per_axis_ == 0;
}

std::string_view to_string(CertStatus status) {
  switch (status) {
    case CertStatus::kCertifiedNonneg:
      return "CERTIFIED_NONNEG";
    case CertStatus::kRefuted:
      return "REFUTED";
    case CertStatus::kInconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

CertStatus classify_certificate(double grid_min, double margin, double eps_pd) {
  if (grid_min < -eps_pd) return CertStatus::kRefuted;
  if (grid_min - margin >= -eps_pd) return CertStatus::kCertifiedNonneg;
  return CertStatus::kInconclusive;
}

AtomicMeasure::AtomicMeasure(int dim, std::vector<Atom> atoms) : dim_(dim), atoms_(std::move(atoms)) {
  for (const auto& atom : atoms_) {
    if (static_cast<int>(atom.point.size()) != dim_) {
      throw DimensionMismatch("AtomicMeasure: atom point has wrong dimension");
    }
    if (!(atom.weight >= 0.0) || !std::isfinite(atom.weight)) {
      throw std::invalid_argument("AtomicMeasure: weights must be finite and nonnegative");
    }
  }
}

double AtomicMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& atom : atoms_) s += atom.weight;
  return s;
}

double fourier_eval(const SymmetricSequence& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.dim()) {
    throw DimensionMismatch("fourier_eval: point dimension does not match sequence");
  }
  double s = 0.0;
  for (const auto& [n, v] : f.entries()) {
    if (n.is_zero()) {
      s += v;
      continue;
    }
    double phase = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) phase += n[i] * x[i];
    s += 2.0 * v * std::cos(phase);
  }
  return s;
}

double fourier_eval(const SymmetricSequence& f, double x) {
  return fourier_eval(f, std::span<const double>(&x, 1));
}

double l1_lower_bound(const SymmetricSequence& f) {
  double s = f.at_zero();
  for (const auto& [n, v] : f.entries()) {
    if (!n.is_zero()) s -= 2.0 * std::abs(v);
  }
  return s;
}

double gradient_bound(const SymmetricSequence& f) {
  double s = 0.0;
  for (const auto& [n, v] : f.entries()) s += 2.0 * std::abs(v) * n.norm2();
  return s;
}

std::vector<double> evaluate_on_grid(const SymmetricSequence& f, const TorusGrid& grid,
                                     std::span<const std::int64_t> indices) {
  require_dim(f, grid);
  const std::int64_t g = grid.points_per_axis();
  const PhaseTable table(g);
  const double f0 = f.at_zero();
  const auto support = f.positive_support();
  std::vector<double> coef;
  coef.reserve(support.size());
  for (const auto& n : support) coef.push_back(2.0 * f.value_at(n));

  const std::size_t count = indices.empty() ? static_cast<std::size_t>(grid.size()) : indices.size();
  std::vector<double> out(count);
  for (std::size_t p = 0; p < count; ++p) {
    const std::int64_t flat = indices.empty() ? static_cast<std::int64_t>(p) : indices[p];
    const auto axis = grid.axis_indices(flat);
    double s = f0;
    for (std::size_t k = 0; k < support.size(); ++k) {
      s += coef[k] * table.cos(phase_index(support[k], axis, g));
    }
    out[p] = s;
  }
  return out;
}

std::vector<double> cosine_matrix(std::span<const MultiIndex> support, const TorusGrid& grid,
                                  std::span<const std::int64_t> indices) {
  const std::int64_t g = grid.points_per_axis();
  const PhaseTable table(g);
  std::vector<double> out(indices.size() * support.size());
  for (std::size_t p = 0; p < indices.size(); ++p) {
    const auto axis = grid.axis_indices(indices[p]);
    for (std::size_t k = 0; k < support.size(); ++k) {
      if (support[k].dim() != grid.dim()) throw DimensionMismatch("cosine_matrix: index dimension");
      out[p * support.size() + k] = table.cos(phase_index(support[k], axis, g));
    }
  }
  return out;
}

CertifiedValue certified_min(const SymmetricSequence& f, const TorusGrid& grid, double eps_pd) {
  require_dim(f, grid);
  const std::int64_t g = grid.points_per_axis();
  const PhaseTable table(g);
  const double rho = grid.mesh_radius();
  const double f0 = f.at_zero();
  const auto support = f.positive_support();
  const int d = grid.dim();

  // 2|f(n)| ‖n‖^k sums: k = 1 (gradient), 2 (Hessian), 4 (fourth derivative).
  double b1 = 0.0, b2 = 0.0, b4 = 0.0;
  std::vector<double> coef;
  coef.reserve(support.size());
  for (const auto& n : support) {
    const double a = f.value_at(n);
    const double nn = n.norm2();
    coef.push_back(2.0 * a);
    b1 += 2.0 * std::abs(a) * nn;
    b2 += 2.0 * std::abs(a) * nn * nn;
    b4 += 2.0 * std::abs(a) * nn * nn * nn * nn;
  }

  double grid_min = std::numeric_limits<double>::infinity();
  std::int64_t argmin = 0;
  double local_bound = std::numeric_limits<double>::infinity();

  if (d == 1) {
    const double remainder = b4 * std::pow(rho, 4) / 24.0;
    for (std::int64_t j = 0; j <= g / 2; ++j) {
      double v = f0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
      for (std::size_t k = 0; k < support.size(); ++k) {
        const double n = support[k][0];
        const std::int64_t ph = positive_mod(static_cast<std::int64_t>(support[k][0]) * j, g);
        const double c = table.cos(ph);
        const double s = table.sin(ph);
        v += coef[k] * c;
        d1 -= coef[k] * n * s;
        d2 -= coef[k] * n * n * c;
        d3 += coef[k] * n * n * n * s;
      }
      if (v < grid_min) {
        grid_min = v;
        argmin = j;
      }
      local_bound = std::min(local_bound, cubic_min(v, d1, d2, d3, rho) - remainder);
    }
  } else {
    const double remainder = 0.5 * b2 * rho * rho;
    for (const std::int64_t flat : grid.symmetric_representatives()) {
      const auto axis = grid.axis_indices(flat);
      double v = f0;
      std::vector<double> grad(static_cast<std::size_t>(d), 0.0);
      for (std::size_t k = 0; k < support.size(); ++k) {
        const std::int64_t ph = phase_index(support[k], axis, g);
        v += coef[k] * table.cos(ph);
        const double s = table.sin(ph);
        for (int i = 0; i < d; ++i) grad[static_cast<std::size_t>(i)] -= coef[k] * support[k][static_cast<std::size_t>(i)] * s;
      }
      double gnorm = 0.0;
      for (double gi : grad) gnorm += gi * gi;
      gnorm = std::sqrt(gnorm);
      if (v < grid_min) {
        grid_min = v;
        argmin = flat;
      }
      local_bound = std::min(local_bound, v - gnorm * rho - remainder);
    }
  }

  const double first_order = grid_min - b1 * rho;
  const double bound = std::min(grid_min, std::max(first_order, local_bound));

  CertifiedValue out;
  out.grid_min = grid_min;
  out.margin = grid_min - bound;
  out.eps_pd = eps_pd;
  out.status = classify_certificate(out.grid_min, out.margin, eps_pd);
  out.argmin = grid.point(argmin);
  return out;
}

SymmetricSequence synthesize_from_measure(const AtomicMeasure& measure, std::span<const MultiIndex> support) {
  std::map<MultiIndex, double> values;
  for (const auto& n : support) {
    if (n.dim() != measure.dim()) throw DimensionMismatch("synthesize_from_measure: support dimension");
    double s = 0.0;
    for (const auto& atom : measure.atoms()) {
      double phase = 0.0;
      for (std::size_t i = 0; i < atom.point.size(); ++i) phase += n[i] * atom.point[i];
      s += atom.weight * std::cos(phase);
    }
    values[n.canonical()] = s;
  }
  return SymmetricSequence(measure.dim(), values);
}

ParsevalResult parseval_check(const SymmetricSequence& f, const AtomicMeasure& measure) {
  if (f.dim() != measure.dim()) throw DimensionMismatch("parseval_check: dimensions differ");
  std::vector<MultiIndex> support;
  for (const auto& [n, v] : f.entries()) support.push_back(n);
  const SymmetricSequence h = synthesize_from_measure(measure, support);
  ParsevalResult out{pairing(f, h), 0.0};
  for (const auto& atom : measure.atoms()) out.rhs += atom.weight * fourier_eval(f, atom.point);
  return out;
}

}  // namespace conedual
