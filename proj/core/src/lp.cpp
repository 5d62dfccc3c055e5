#include "conedual/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace conedual {

namespace {

// Canonical row: coefficients · x >= rhs, or = rhs.
struct CanonicalRow {
  std::vector<double> coefficients;
  double rhs;
  bool equality;
  std::int64_t source;  // constraint index, or -1 - j for a bound on x_j
  double sign;          // +1 if the source row was used as is, -1 if negated
};

// Standard form min cost^T y, A y = b, y >= 0 with A dense column-major.
class StandardFormSimplex {
 public:
  StandardFormSimplex(std::size_t rows, std::vector<double> columns, std::vector<double> cost,
                      std::vector<double> rhs, const LpTolerances& tol)
      : m_(rows),
        n_(cost.size()),
        cost_(std::move(cost)),
        tol_(tol) {
    // Flip rows so that b >= 0; the flip is folded into the stored columns.
    row_sign_.assign(m_, 1.0);
    b_ = std::move(rhs);
    for (std::size_t i = 0; i < m_; ++i) {
      if (b_[i] < 0.0) {
        row_sign_[i] = -1.0;
        b_[i] = -b_[i];
      }
    }
    a_ = std::move(columns);
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t i = 0; i < m_; ++i) a_[j * m_ + i] *= row_sign_[i];
    }
  }

  enum class Result { kOptimal, kInfeasible, kUnbounded, kFailure };

  // Solves with a deterministic perturbation of b to break the heavy
  // degeneracy of grid programs, then restores b and repairs primal
  // feasibility with dual simplex pivots. Falls back to the unperturbed
  // problem when the perturbed one is infeasible.
  Result run() {
    Result r = run_with(true);
    if (r == Result::kInfeasible || r == Result::kFailure) r = run_with(false);
    return r;
  }

  // Values of the structural variables.
  std::vector<double> solution() const {
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) y[basis_[i]] = std::max(0.0, beta_[i]);
    }
    return y;
  }

  // Simplex multipliers for the (unflipped) equality rows.
  std::vector<double> multipliers() const {
    std::vector<double> pi = compute_pi();
    // Iterative refinement of B^T pi = c_B.
    std::vector<double> residual(m_);
    for (int pass = 0; pass < 3; ++pass) {
      for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t j = basis_[i];
        long double dot = 0.0L;
        if (j >= n_) {
          dot = pi[j - n_];
        } else {
          const double* col = &a_[j * m_];
          for (std::size_t k = 0; k < m_; ++k) dot += static_cast<long double>(col[k]) * pi[k];
        }
        residual[i] = static_cast<double>(static_cast<long double>(cost_of(j)) - dot);
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (residual[i] == 0.0) continue;
        const double* row = &inverse_[i * m_];
        for (std::size_t k = 0; k < m_; ++k) pi[k] += residual[i] * row[k];
      }
    }
    for (std::size_t i = 0; i < m_; ++i) pi[i] *= row_sign_[i];
    return pi;
  }

  std::int64_t iterations() const { return iterations_; }
  const std::string& failure() const { return failure_; }

 private:
  Result run_with(bool perturb) {
    failure_.clear();
    basis_.resize(m_);
    is_basic_.assign(n_ + m_, false);
    for (std::size_t i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      is_basic_[n_ + i] = true;
    }
    inverse_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) inverse_[i * m_ + i] = 1.0;

    double b_scale = 1.0;
    for (double v : b_) b_scale = std::max(b_scale, std::abs(v));
    const std::vector<double> exact_b = b_;
    if (perturb) {
      for (std::size_t i = 0; i < m_; ++i) {
        const double xi = 1.0 + static_cast<double>((i * 2654435761ULL) % 1000) / 1000.0;
        b_[i] += 1e-7 * b_scale * xi;
      }
    }
    beta_ = b_;

    phase_ = 1;
    Result r = iterate();
    if (r == Result::kOptimal) {
      double infeasibility = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] >= n_) infeasibility += beta_[i];
      }
      if (infeasibility > (perturb ? 1e-6 : 1e-9) * b_scale) r = Result::kInfeasible;
    }
    if (r == Result::kOptimal) {
      drive_out_artificials();
      phase_ = 2;
      r = iterate();
    }
    b_ = exact_b;
    if (r != Result::kOptimal) return r;
    if (!refactor()) return Result::kFailure;
    if (perturb) {
      if (!dual_cleanup(b_scale)) return Result::kFailure;
      r = iterate();
    }
    return r;
  }

  // Dual simplex pivots on a dual-feasible basis until beta >= 0, with the
  // same switch to Bland's rule after a run of degenerate pivots.
  bool dual_cleanup(double b_scale) {
    const double tol = 1e-12 * b_scale;
    const std::int64_t limit = iterations_ + 50 * static_cast<std::int64_t>(n_ + m_) + 1000;
    int degenerate_run = 0;
    int since_refactor = 0;
    std::vector<double> w;
    while (iterations_ < limit) {
      if (since_refactor >= tol_.refactor_interval) {
        if (!refactor()) return false;
        since_refactor = 0;
      }
      const bool bland = degenerate_run >= tol_.degenerate_pivots_before_bland;
      std::size_t r = m_;
      double worst = -tol;
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] >= n_) {
          if (std::abs(beta_[i]) > 1e-9 * b_scale) {
            failure_ = "artificial variable became nonzero after restoring the right-hand side";
            return false;
          }
          continue;
        }
        if (beta_[i] >= -tol) continue;
        if (bland ? (r == m_ || basis_[i] < basis_[r]) : beta_[i] < worst) {
          worst = beta_[i];
          r = i;
        }
      }
      if (r == m_) {
        for (double& v : beta_) v = std::max(v, 0.0);
        return true;
      }
      const std::vector<double> pi = compute_pi();
      const double* row = &inverse_[r * m_];
      std::vector<double> alpha(n_, 0.0);
      std::vector<double> ratio(n_, kInfinity);
      double best_ratio = kInfinity;
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic_[j]) continue;
        const double* col = &a_[j * m_];
        double a = 0.0;
        for (std::size_t k = 0; k < m_; ++k) a += row[k] * col[k];
        if (a >= -tol_.pivot) continue;
        alpha[j] = a;
        ratio[j] = std::max(0.0, cost_of(j) - column_dot(j, pi)) / -a;
        best_ratio = std::min(best_ratio, ratio[j]);
      }
      if (best_ratio == kInfinity) {
        failure_ = "dual simplex cleanup found no entering column";
        return false;
      }
      // Among near-ties take the largest |alpha| (or the smallest index).
      std::size_t entering = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (ratio[j] > best_ratio + 1e-12) continue;
        if (entering == n_) {
          entering = j;
          if (bland) break;
        } else if (-alpha[j] > -alpha[entering]) {
          entering = j;
        }
      }
      ftran(entering, w);
      const double theta = beta_[r] / w[r];
      for (std::size_t i = 0; i < m_; ++i) beta_[i] -= theta * w[i];
      beta_[r] = theta;
      pivot(r, entering, w);
      ++iterations_;
      ++since_refactor;
      degenerate_run = best_ratio <= 1e-12 ? degenerate_run + 1 : 0;
    }
    failure_ = "dual simplex cleanup did not converge";
    return false;
  }

  double cost_of(std::size_t j) const {
    if (j >= n_) return phase_ == 1 ? 1.0 : 0.0;
    return phase_ == 1 ? 0.0 : cost_[j];
  }

  std::vector<double> compute_pi() const {
    std::vector<double> pi(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      const double c = cost_of(basis_[r]);
      if (c == 0.0) continue;
      const double* row = &inverse_[r * m_];
      for (std::size_t i = 0; i < m_; ++i) pi[i] += c * row[i];
    }
    return pi;
  }

  double column_dot(std::size_t j, const std::vector<double>& v) const {
    if (j >= n_) return v[j - n_];
    const double* col = &a_[j * m_];
    double s = 0.0;
    for (std::size_t i = 0; i < m_; ++i) s += col[i] * v[i];
    return s;
  }

  void ftran(std::size_t j, std::vector<double>& w) const {
    w.assign(m_, 0.0);
    if (j >= n_) {
      const std::size_t k = j - n_;
      for (std::size_t i = 0; i < m_; ++i) w[i] = inverse_[i * m_ + k];
      return;
    }
    const double* col = &a_[j * m_];
    for (std::size_t i = 0; i < m_; ++i) {
      const double* row = &inverse_[i * m_];
      double s = 0.0;
      for (std::size_t k = 0; k < m_; ++k) s += row[k] * col[k];
      w[i] = s;
    }
  }

  void pivot(std::size_t r, std::size_t entering, const std::vector<double>& w) {
    const double wr = w[r];
    double* prow = &inverse_[r * m_];
    for (std::size_t k = 0; k < m_; ++k) prow[k] /= wr;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || w[i] == 0.0) continue;
      double* row = &inverse_[i * m_];
      const double f = w[i];
      for (std::size_t k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }
    is_basic_[basis_[r]] = false;
    basis_[r] = entering;
    is_basic_[entering] = true;
  }

  // Gauss-Jordan inversion of the current basis with partial pivoting.
  bool refactor() {
    if (m_ == 0) return true;
    std::vector<double> mat(m_ * m_, 0.0);  // row-major B
    for (std::size_t c = 0; c < m_; ++c) {
      const std::size_t j = basis_[c];
      for (std::size_t i = 0; i < m_; ++i) {
        mat[i * m_ + c] = j >= n_ ? (i == j - n_ ? 1.0 : 0.0) : a_[j * m_ + i];
      }
    }
    std::vector<double> inv(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) inv[i * m_ + i] = 1.0;
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t p = c;
      double best = std::abs(mat[c * m_ + c]);
      for (std::size_t i = c + 1; i < m_; ++i) {
        if (std::abs(mat[i * m_ + c]) > best) {
          best = std::abs(mat[i * m_ + c]);
          p = i;
        }
      }
      if (best < 1e-14) {
        failure_ = "singular basis during refactorization";
        return false;
      }
      if (p != c) {
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(mat[p * m_ + k], mat[c * m_ + k]);
          std::swap(inv[p * m_ + k], inv[c * m_ + k]);
        }
      }
      const double d = mat[c * m_ + c];
      for (std::size_t k = 0; k < m_; ++k) {
        mat[c * m_ + k] /= d;
        inv[c * m_ + k] /= d;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (i == c) continue;
        const double f = mat[i * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          mat[i * m_ + k] -= f * mat[c * m_ + k];
          inv[i * m_ + k] -= f * inv[c * m_ + k];
        }
      }
    }
    // inv is B^{-1}: rows of B^{-1} indexed by basis position.
    inverse_ = std::move(inv);
    for (std::size_t i = 0; i < m_; ++i) {
      const double* row = &inverse_[i * m_];
      double s = 0.0;
      for (std::size_t k = 0; k < m_; ++k) s += row[k] * b_[k];
      beta_[i] = s;
    }
    return true;
  }

  void drive_out_artificials() {
    std::vector<double> w;
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      const double* row = &inverse_[r * m_];
      std::size_t best_j = n_;
      double best = tol_.pivot;
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic_[j]) continue;
        const double* col = &a_[j * m_];
        double s = 0.0;
        for (std::size_t k = 0; k < m_; ++k) s += row[k] * col[k];
        if (std::abs(s) > best) {
          best = std::abs(s);
          best_j = j;
        }
      }
      if (best_j == n_) continue;  // redundant row; artificial stays at zero
      ftran(best_j, w);
      const double theta = beta_[r] / w[r];
      for (std::size_t i = 0; i < m_; ++i) beta_[i] -= theta * w[i];
      beta_[r] = theta;
      pivot(r, best_j, w);
    }
  }

  Result iterate() {
    const std::int64_t limit = iterations_ + 50 * static_cast<std::int64_t>(n_ + m_) + 1000;
    int degenerate_run = 0;
    int since_refactor = 0;
    std::vector<double> w;
    while (true) {
      if (iterations_ >= limit) {
        failure_ = "iteration limit reached";
        return Result::kFailure;
      }
      if (since_refactor >= tol_.refactor_interval) {
        if (!refactor()) return Result::kFailure;
        since_refactor = 0;
      }
      const bool bland = degenerate_run >= tol_.degenerate_pivots_before_bland;
      const std::vector<double> pi = compute_pi();

      std::size_t entering = n_;
      double best_d = -tol_.optimality;
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic_[j]) continue;
        const double d = cost_of(j) - column_dot(j, pi);
        if (d < best_d) {
          best_d = d;
          entering = j;
          if (bland) break;
        }
      }
      if (entering == n_) return Result::kOptimal;

      ftran(entering, w);

      // Harris-style two-pass ratio test. Basic artificials in phase 2 block
      // in either direction because they must stay at zero.
      constexpr double kHarris = 1e-12;
      double theta_max = kInfinity;
      for (std::size_t i = 0; i < m_; ++i) {
        const bool locked = phase_ == 2 && basis_[i] >= n_;
        if (locked && std::abs(w[i]) > tol_.pivot) {
          theta_max = 0.0;
        } else if (w[i] > tol_.pivot) {
          theta_max = std::min(theta_max, (std::max(beta_[i], 0.0) + kHarris) / w[i]);
        }
      }
      if (theta_max == kInfinity) return Result::kUnbounded;

      std::size_t leave = m_;
      double best_pivot = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const bool locked = phase_ == 2 && basis_[i] >= n_;
        double ratio;
        double magnitude;
        if (locked && std::abs(w[i]) > tol_.pivot) {
          ratio = 0.0;
          magnitude = std::abs(w[i]);
        } else if (w[i] > tol_.pivot) {
          ratio = std::max(beta_[i], 0.0) / w[i];
          magnitude = w[i];
        } else {
          continue;
        }
        if (ratio > theta_max) continue;
        if (bland) {
          if (leave == m_ || basis_[i] < basis_[leave]) leave = i;
        } else if (magnitude > best_pivot) {
          best_pivot = magnitude;
          leave = i;
        }
      }
      if (leave == m_) {
        failure_ = "ratio test found no pivot";
        return Result::kFailure;
      }

      const double theta = basis_[leave] >= n_ && phase_ == 2 ? 0.0 : std::max(beta_[leave], 0.0) / w[leave];
      for (std::size_t i = 0; i < m_; ++i) {
        beta_[i] -= theta * w[i];
        if (beta_[i] < 0.0 && beta_[i] > -1e-13) beta_[i] = 0.0;
      }
      beta_[leave] = theta;
      pivot(leave, entering, w);
      ++iterations_;
      ++since_refactor;
      degenerate_run = theta <= 1e-12 ? degenerate_run + 1 : 0;
    }
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<double> cost_;
  LpTolerances tol_;
  std::vector<double> row_sign_;
  std::vector<double> b_;
  std::vector<double> a_;
  std::vector<std::size_t> basis_;
  std::vector<bool> is_basic_;
  std::vector<double> inverse_;
  std::vector<double> beta_;
  int phase_ = 1;
  std::int64_t iterations_ = 0;
  std::string failure_;
};

std::vector<CanonicalRow> canonical_rows(const LinearProgram& lp) {
  const std::size_t n = lp.num_variables();
  std::vector<CanonicalRow> rows;
  rows.reserve(lp.constraints.size() + 2 * n);
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& c = lp.constraints[i];
    const auto src = static_cast<std::int64_t>(i);
    switch (c.relation) {
      case Relation::kGreaterEqual:
        rows.push_back({c.coefficients, c.rhs, false, src, 1.0});
        break;
      case Relation::kLessEqual: {
        std::vector<double> neg(c.coefficients.size());
        std::transform(c.coefficients.begin(), c.coefficients.end(), neg.begin(), [](double v) { return -v; });
        rows.push_back({std::move(neg), -c.rhs, false, src, -1.0});
        break;
      }
      case Relation::kEqual:
        rows.push_back({c.coefficients, c.rhs, true, src, 1.0});
        break;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    const auto src = -1 - static_cast<std::int64_t>(j);
    if (lo == hi) {
      std::vector<double> e(n, 0.0);
      e[j] = 1.0;
      rows.push_back({std::move(e), lo, true, src, 1.0});
      continue;
    }
    if (std::isfinite(lo)) {
      std::vector<double> e(n, 0.0);
      e[j] = 1.0;
      rows.push_back({std::move(e), lo, false, src, 1.0});
    }
    if (std::isfinite(hi)) {
      std::vector<double> e(n, 0.0);
      e[j] = -1.0;
      rows.push_back({std::move(e), -hi, false, src, -1.0});
    }
  }
  return rows;
}

// Builds the dual standard form of min c^T x s.t. rows. Each inequality row
// contributes one column, each equality row two (y+ and y-).
struct DualForm {
  std::vector<double> columns;
  std::vector<double> cost;
  std::vector<std::size_t> row_of_column;
  std::vector<double> column_sign;
};

DualForm build_dual(const std::vector<CanonicalRow>& rows, std::size_t n) {
  DualForm d;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int copies = rows[i].equality ? 2 : 1;
    for (int c = 0; c < copies; ++c) {
      const double s = c == 0 ? 1.0 : -1.0;
      for (std::size_t k = 0; k < n; ++k) d.columns.push_back(s * rows[i].coefficients[k]);
      d.cost.push_back(-s * rows[i].rhs);
      d.row_of_column.push_back(i);
      d.column_sign.push_back(s);
    }
  }
  return d;
}

}  // namespace

LinearProgram::LinearProgram(std::size_t num_variables, Sense s)
    : sense(s),
      objective(num_variables, 0.0),
      lower(num_variables, -kInfinity),
      upper(num_variables, kInfinity) {}

void LinearProgram::add_constraint(std::vector<double> coefficients, Relation relation, double rhs) {
  if (coefficients.size() != num_variables()) {
    throw std::invalid_argument("LinearProgram: constraint has " + std::to_string(coefficients.size()) +
                                " coefficients, expected " + std::to_string(num_variables()));
  }
  constraints.push_back({std::move(coefficients), relation, rhs});
}

void LinearProgram::set_bounds(std::size_t j, double lo, double hi) {
  if (j >= num_variables()) throw std::invalid_argument("LinearProgram: bound index out of range");
  lower[j] = lo;
  upper[j] = hi;
}

void LinearProgram::validate() const {
  const std::size_t n = num_variables();
  if (lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("LinearProgram: bound vectors do not match the variable count");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j])) throw std::invalid_argument("LinearProgram: non-finite objective");
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] == kInfinity || upper[j] == -kInfinity) {
      throw std::invalid_argument("LinearProgram: malformed bounds for variable " + std::to_string(j));
    }
  }
  if (!std::isfinite(objective_constant)) throw std::invalid_argument("LinearProgram: non-finite constant");
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& c = constraints[i];
    if (c.coefficients.size() != n) {
      throw std::invalid_argument("LinearProgram: row " + std::to_string(i) + " has length " +
                                  std::to_string(c.coefficients.size()) + ", expected " + std::to_string(n));
    }
    if (!std::isfinite(c.rhs) ||
        !std::all_of(c.coefficients.begin(), c.coefficients.end(), [](double v) { return std::isfinite(v); })) {
      throw std::invalid_argument("LinearProgram: non-finite data in row " + std::to_string(i));
    }
  }
}

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "OPTIMAL";
    case LpStatus::kInfeasible:
      return "INFEASIBLE";
    case LpStatus::kUnbounded:
      return "UNBOUNDED";
    case LpStatus::kNumericalFailure:
      return "NUMERICAL_FAILURE";
  }
  return "NUMERICAL_FAILURE";
}

LpOutcome solve(const LinearProgram& lp, const LpTolerances& tolerances) {
  lp.validate();
  LpOutcome out;
  out.tolerances = tolerances;

  const std::size_t n = lp.num_variables();
  for (std::size_t j = 0; j < n; ++j) {
    if (lp.lower[j] > lp.upper[j]) {
      out.status = LpStatus::kInfeasible;
      out.message = "empty bound interval for variable " + std::to_string(j);
      return out;
    }
  }

  const double sense_sign = lp.sense == Sense::kMinimize ? 1.0 : -1.0;
  std::vector<double> c(n);
  for (std::size_t j = 0; j < n; ++j) c[j] = sense_sign * lp.objective[j];

  const auto rows = canonical_rows(lp);
  DualForm dual = build_dual(rows, n);

  StandardFormSimplex simplex(n, dual.columns, dual.cost, c, tolerances);
  const auto result = simplex.run();
  out.iterations = simplex.iterations();

  if (result == StandardFormSimplex::Result::kFailure) {
    out.status = LpStatus::kNumericalFailure;
    out.message = simplex.failure();
    return out;
  }
  if (result == StandardFormSimplex::Result::kUnbounded) {
    out.status = LpStatus::kInfeasible;
    out.message = "dual unbounded";
    return out;
  }
  if (result == StandardFormSimplex::Result::kInfeasible) {
    // Primal is infeasible or unbounded; decide feasibility with c = 0.
    StandardFormSimplex probe(n, dual.columns, dual.cost, std::vector<double>(n, 0.0), tolerances);
    const auto probe_result = probe.run();
    out.iterations += probe.iterations();
    if (probe_result == StandardFormSimplex::Result::kFailure) {
      out.status = LpStatus::kNumericalFailure;
      out.message = probe.failure();
    } else if (probe_result == StandardFormSimplex::Result::kUnbounded) {
      out.status = LpStatus::kInfeasible;
    } else {
      out.status = LpStatus::kUnbounded;
    }
    return out;
  }

  // x = -π, then project into the bounds.
  const std::vector<double> pi = simplex.multipliers();
  std::vector<double> x(n);
  double bound_violation = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = -pi[j];
    if (x[j] < lp.lower[j]) {
      bound_violation = std::max(bound_violation, (lp.lower[j] - x[j]) / (1.0 + std::abs(lp.lower[j])));
      x[j] = lp.lower[j];
    }
    if (x[j] > lp.upper[j]) {
      bound_violation = std::max(bound_violation, (x[j] - lp.upper[j]) / (1.0 + std::abs(lp.upper[j])));
      x[j] = lp.upper[j];
    }
  }

  const std::vector<double> y = simplex.solution();

  double residual = bound_violation;
  double primal_obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) primal_obj += c[j] * x[j];
  double dual_obj = 0.0;
  double slackness = 0.0;
  std::vector<double> row_value(rows.size(), 0.0);
  std::vector<double> row_scale(rows.size(), 1.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double s = 0.0, scale = 1.0 + std::abs(rows[i].rhs);
    for (std::size_t k = 0; k < n; ++k) {
      s += rows[i].coefficients[k] * x[k];
      scale += std::abs(rows[i].coefficients[k] * x[k]);
    }
    row_value[i] = s;
    row_scale[i] = scale;
    const double viol = rows[i].equality ? std::abs(s - rows[i].rhs) : std::max(0.0, rows[i].rhs - s);
    residual = std::max(residual, viol / scale);
  }
  out.row_duals.assign(lp.constraints.size(), 0.0);
  for (std::size_t col = 0; col < y.size(); ++col) {
    if (y[col] == 0.0) continue;
    const std::size_t i = dual.row_of_column[col];
    const double yi = dual.column_sign[col] * y[col];
    dual_obj += yi * rows[i].rhs;
    slackness = std::max(slackness, std::abs(yi * (row_value[i] - rows[i].rhs)) / row_scale[i]);
    if (rows[i].source >= 0) {
      out.row_duals[static_cast<std::size_t>(rows[i].source)] += sense_sign * rows[i].sign * yi;
    }
  }

  out.x = std::move(x);
  out.objective_value = lp.objective_constant;
  for (std::size_t j = 0; j < n; ++j) out.objective_value += lp.objective[j] * out.x[j];
  out.primal_residual = residual;
  out.duality_gap = std::abs(primal_obj - dual_obj) / (1.0 + std::abs(primal_obj));
  out.complementary_slackness = slackness;
  if (residual > tolerances.feasibility) {
    out.status = LpStatus::kNumericalFailure;
    out.message = "primal residual " + std::to_string(residual) + " exceeds feasibility tolerance";
    return out;
  }
  out.status = LpStatus::kOptimal;
  return out;
}

void write_lp_text(std::ostream& os, const LinearProgram& lp) {
  char buf[64];
  auto num = [&](double v) -> const char* {
    if (v == kInfinity) return "+inf";
    if (v == -kInfinity) return "-inf";
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  };
  os << "SENSE " << (lp.sense == Sense::kMinimize ? "MIN" : "MAX") << '\n';
  os << "VARIABLES " << lp.num_variables() << '\n';
  os << "CONSTANT " << num(lp.objective_constant) << '\n';
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    os << "VAR " << j << " OBJ " << num(lp.objective[j]);
    os << " LO " << num(lp.lower[j]);
    os << " HI " << num(lp.upper[j]) << '\n';
  }
  os << "ROWS " << lp.constraints.size() << '\n';
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& c = lp.constraints[i];
    const char* rel = c.relation == Relation::kLessEqual ? "LE" : c.relation == Relation::kEqual ? "EQ" : "GE";
    os << "ROW " << i << ' ' << rel << ' ' << num(c.rhs);
    for (double v : c.coefficients) os << ' ' << num(v);
    os << '\n';
  }
  os << "END\n";
}

}  // namespace conedual
