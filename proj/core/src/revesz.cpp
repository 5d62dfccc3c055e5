#include "conedual/revesz.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include "conedual/cones.hpp"
#include "conedual/error.hpp"
#include "conedual/parallel.hpp"

namespace conedual {

namespace {

void enumerate_box(int dim, int half_width, std::vector<int>& prefix, std::set<MultiIndex>& out) {
  if (static_cast<int>(prefix.size()) == dim) {
    MultiIndex n(prefix);
    if (n.is_positive()) out.insert(std::move(n));
    return;
  }
  for (int c = -half_width; c <= half_width; ++c) {
    prefix.push_back(c);
    enumerate_box(dim, half_width, prefix, out);
    prefix.pop_back();
  }
}

void notify(const SolverOptions& options, std::string_view tag, const LinearProgram& lp) {
  if (options.lp_observer) options.lp_observer(tag, lp);
}

// Rows of a grid constraint: cos(n·x_j) for n in `support`, j over the
// symmetric representatives of the grid.
std::vector<double> grid_cosines(const std::vector<MultiIndex>& support, const TorusGrid& grid,
                                 std::vector<std::int64_t>& reps) {
  reps = grid.symmetric_representatives();
  return cosine_matrix(support, grid, reps);
}

double cosine_series_derivatives(const SymmetricSequence& f, double x, double& d1, double& d2) {
  double v = f.at_zero();
  d1 = 0.0;
  d2 = 0.0;
  for (const auto& [n, c] : f.entries()) {
    if (n.is_zero()) continue;
    const double k = n.coords()[0];
    v += 2.0 * c * std::cos(k * x);
    d1 -= 2.0 * c * k * std::sin(k * x);
    d2 -= 2.0 * c * k * k * std::cos(k * x);
  }
  return v;
}

// Local minima in [0, π] where the cosine series is negative: a coarse scan
// of each grid cell followed by a few Newton steps.
std::vector<double> negative_local_minima(const SymmetricSequence& f, std::int64_t points, double tol) {
  constexpr int kSub = 8;
  const double step = 2.0 * std::numbers::pi / static_cast<double>(points);
  const std::int64_t cells = points / 2 + 1;
  std::vector<double> out;
  double d1 = 0.0;
  double d2 = 0.0;
  for (std::int64_t c = 0; c < cells; ++c) {
    const double lo = step * static_cast<double>(c);
    double best_x = lo;
    double best = kInfinity;
    for (int s = 1; s < kSub; ++s) {
      const double x = lo + step * s / kSub;
      const double v = fourier_eval(f, x);
      if (v < best) {
        best = v;
        best_x = x;
      }
    }
    if (best >= 0.0) continue;
    double x = best_x;
    for (int it = 0; it < 8; ++it) {
      cosine_series_derivatives(f, x, d1, d2);
      if (d2 <= 0.0) break;
      const double nx = x - d1 / d2;
      if (nx < lo || nx > lo + step) break;
      x = nx;
    }
    const double v = fourier_eval(f, x);
    if (v < best) {
      best = v;
      best_x = x;
    }
    if (best < -tol) out.push_back(std::clamp(best_x, 0.0, std::numbers::pi));
  }
  return out;
}

std::vector<double> point_cosines(const std::vector<MultiIndex>& support, double x) {
  std::vector<double> row(support.size());
  for (std::size_t k = 0; k < support.size(); ++k) row[k] = std::cos(support[k].coords()[0] * x);
  return row;
}

constexpr double kExchangeTolerance = 1e-12;

// Constraint angles in [0, π] used so far; rejects cuts within a small
// fraction of a grid step of an existing point.
class CutSet {
 public:
  explicit CutSet(std::int64_t points) : step_(2.0 * std::numbers::pi / static_cast<double>(points)) {}

  bool admit(double x) {
    const double g = std::round(x / step_) * step_;
    if (std::abs(x - g) < kSeparation * step_) return false;
    auto it = std::lower_bound(extra_.begin(), extra_.end(), x);
    if (it != extra_.end() && *it - x < kSeparation * step_) return false;
    if (it != extra_.begin() && x - *std::prev(it) < kSeparation * step_) return false;
    extra_.insert(it, x);
    return true;
  }

 private:
  static constexpr double kSeparation = 1.0 / 64.0;
  double step_;
  std::vector<double> extra_;
};

}  // namespace

ReveszProblem ReveszProblem::with_grid(const TorusGrid& g) const {
  ReveszProblem p = *this;
  if (g.dim() != dim()) throw DimensionMismatch("ReveszProblem::with_grid: grid dimension");
  p.grid = g;
  return p;
}

ReveszProblem make_revesz_problem(SignSupportPattern pattern, SymmetricSequence r,
                                  std::optional<int> window_half_width, TorusGrid grid) {
  if (pattern.dim() != r.dim() || grid.dim() != r.dim()) {
    throw DimensionMismatch("make_revesz_problem: pattern, r and grid must share a dimension");
  }
  if (r.at_zero() != 1.0) throw std::invalid_argument("make_revesz_problem: r(0) must equal 1");
  const int max_index = std::max(pattern.max_index(), r.support_radius());
  const int half_width = window_half_width.value_or(2 * max_index);
  if (half_width < 0) throw std::invalid_argument("make_revesz_problem: negative window half-width");

  std::set<MultiIndex> window;
  std::vector<int> prefix;
  enumerate_box(r.dim(), half_width, prefix, window);
  for (const auto& n : r.positive_support()) window.insert(n);
  for (const auto& n : pattern.combined()) window.insert(n);
  return ReveszProblem{std::move(pattern), std::move(r), {window.begin(), window.end()}, std::move(grid)};
}

AlphaRelaxed solve_alpha_relaxed(const ReveszProblem& p, const SolverOptions& options) {
  const int d = p.dim();
  const IndexSet combined = p.pattern.combined();
  const std::vector<MultiIndex> vars(combined.begin(), combined.end());
  const std::size_t nv = vars.size();

  LinearProgram lp(nv, Sense::kMinimize);
  lp.objective_constant = p.r.at_zero();
  for (std::size_t k = 0; k < nv; ++k) {
    lp.objective[k] = 2.0 * p.r.value_at(vars[k]);
    switch (p.pattern.classify(vars[k])) {
      case SignClass::kNonnegative:
        lp.set_bounds(k, 0.0, kInfinity);
        break;
      case SignClass::kNonpositive:
        lp.set_bounds(k, -kInfinity, 0.0);
        break;
      default:
        break;
    }
  }
  std::vector<std::int64_t> reps;
  const auto cosines = grid_cosines(vars, p.grid, reps);
  // 1 + 2 Σ f(n) cos(n·x) >= 0
  for (std::size_t j = 0; j < reps.size(); ++j) {
    std::vector<double> row(nv);
    for (std::size_t k = 0; k < nv; ++k) row[k] = 2.0 * cosines[j * nv + k];
    lp.add_constraint(std::move(row), Relation::kGreaterEqual, -1.0);
  }

  std::int64_t iterations = 0;
  std::size_t added = 0;
  CutSet cut_set(p.grid.points_per_axis());
  std::optional<AlphaRelaxed> previous;
  for (int round = 0;; ++round) {
    notify(options, "alpha", lp);
    const LpOutcome out = solve(lp, options.lp);
    iterations += out.iterations;
    if (out.status != LpStatus::kOptimal && previous) {
      previous->lp_iterations = iterations;
      return *std::move(previous);
    }
    if (out.status != LpStatus::kOptimal) {
      throw InternalSolverError("alpha program returned " + std::string(to_string(out.status)) +
                                " although chi_0 is feasible: " + out.message);
    }
    std::map<MultiIndex, double> values{{MultiIndex::zero(d), 1.0}};
    for (std::size_t k = 0; k < nv; ++k) values[vars[k]] = out.x[k];
    SymmetricSequence f(d, values);
    const std::vector<double> cuts = round < options.exchange_rounds && d == 1
                                         ? negative_local_minima(f, p.grid.points_per_axis(), kExchangeTolerance)
                                         : std::vector<double>{};
    const double value = pairing(f, p.r);
    previous = AlphaRelaxed{value, std::move(f), iterations, added};
    std::size_t admitted = 0;
    for (double x : cuts) {
      if (!cut_set.admit(x)) continue;
      ++admitted;
      std::vector<double> row = point_cosines(vars, x);
      for (double& v : row) v *= 2.0;
      lp.add_constraint(std::move(row), Relation::kGreaterEqual, -1.0);
    }
    if (admitted == 0) return *std::move(previous);
    added += admitted;
  }
}

AlphaCertificate certify_alpha(const ReveszProblem& p, const SymmetricSequence& f_star, double value,
                               const SolverOptions& options) {
  const CertifiedValue cv = in_cone_P(f_star, p.grid, options.eps_pd);
  const double m = cv.lower_bound();
  if (m >= 0.0) return AlphaCertificate{value, f_star, 0.0, cv};
  const double s = -m;
  const SymmetricSequence shifted =
      (f_star + SymmetricSequence::delta(p.dim()).scaled(s)).scaled(1.0 / (1.0 + s));
  // f'(0) must be exactly 1.
  const SymmetricSequence witness = shifted.with(MultiIndex::zero(p.dim()), 1.0);
  return AlphaCertificate{(value + s * p.r.at_zero()) / (1.0 + s), witness, s, cv};
}

OmegaRelaxed solve_omega_relaxed(const ReveszProblem& p, const SolverOptions& options) {
  const int d = p.dim();
  // Solved in terms of h = r + t - δ χ_0: variable 0 is h(0) (so δ = r(0) - h(0)),
  // the rest are h(n) on the window minus M ∩ L, where t = 0 pins h(n) = r(n).
  std::vector<MultiIndex> h_vars;
  std::vector<MultiIndex> pinned;
  for (const auto& n : p.window) {
    (p.pattern.classify(n) == SignClass::kFree ? pinned : h_vars).push_back(n);
  }
  const std::size_t nv = h_vars.size() + 1;
  LinearProgram lp(nv, Sense::kMinimize);
  lp.objective[0] = 1.0;
  for (std::size_t k = 0; k < h_vars.size(); ++k) {
    const double rn = p.r.value_at(h_vars[k]);
    switch (p.pattern.classify(h_vars[k])) {
      case SignClass::kNonnegative:  // t <= 0
        lp.set_bounds(k + 1, -kInfinity, rn);
        break;
      case SignClass::kNonpositive:  // t >= 0
        lp.set_bounds(k + 1, rn, kInfinity);
        break;
      default:
        break;
    }
  }
  std::map<MultiIndex, double> pinned_values;
  for (const auto& n : pinned) pinned_values[n] = p.r.value_at(n);
  const SymmetricSequence fixed(d, pinned_values);

  std::vector<std::int64_t> reps;
  const auto cosines = grid_cosines(h_vars, p.grid, reps);
  const auto fixed_hat = evaluate_on_grid(fixed, p.grid, reps);
  // h(0) + 2 Σ h(n) cos(n·x) >= -(pinned part)(x)
  for (std::size_t j = 0; j < reps.size(); ++j) {
    std::vector<double> row(nv);
    row[0] = 1.0;
    for (std::size_t k = 0; k < h_vars.size(); ++k) row[k + 1] = 2.0 * cosines[j * h_vars.size() + k];
    lp.add_constraint(std::move(row), Relation::kGreaterEqual, -fixed_hat[j]);
  }

  std::int64_t iterations = 0;
  std::size_t added = 0;
  CutSet cut_set(p.grid.points_per_axis());
  std::optional<OmegaRelaxed> previous;
  for (int round = 0;; ++round) {
    notify(options, "omega", lp);
    const LpOutcome out = solve(lp, options.lp);
    iterations += out.iterations;
    if (out.status != LpStatus::kOptimal && previous) {
      previous->lp_iterations = iterations;
      return *std::move(previous);
    }
    if (out.status == LpStatus::kUnbounded) {
      throw InternalSolverError("omega program unbounded: grid with " +
                                std::to_string(p.grid.points_per_axis()) + " points per axis cannot control a window of " +
                                std::to_string(p.window.size()) + " indices (aliasing)");
    }
    if (out.status != LpStatus::kOptimal) {
      throw InternalSolverError("omega program returned " + std::string(to_string(out.status)) + ": " +
                                out.message);
    }
    std::map<MultiIndex, double> t_values;
    for (std::size_t k = 0; k < h_vars.size(); ++k) t_values[h_vars[k]] = out.x[k + 1] - p.r.value_at(h_vars[k]);
    SymmetricSequence t(d, t_values);
    const double delta = p.r.at_zero() - out.x[0];
    SymmetricSequence h = p.r + t - SymmetricSequence::delta(d).scaled(delta);
    const std::vector<double> cuts = round < options.exchange_rounds && d == 1
                                         ? negative_local_minima(h, p.grid.points_per_axis(), kExchangeTolerance)
                                         : std::vector<double>{};
    previous = OmegaRelaxed{delta, std::move(t), std::move(h), iterations, added};
    std::size_t admitted = 0;
    for (double x : cuts) {
      if (!cut_set.admit(x)) continue;
      ++admitted;
      std::vector<double> row(nv);
      row[0] = 1.0;
      const std::vector<double> c = point_cosines(h_vars, x);
      for (std::size_t k = 0; k < h_vars.size(); ++k) row[k + 1] = 2.0 * c[k];
      lp.add_constraint(std::move(row), Relation::kGreaterEqual, -fourier_eval(fixed, x));
    }
    if (admitted == 0) return *std::move(previous);
    added += admitted;
  }
}

OmegaCertificate certify_omega(const ReveszProblem& p, double delta, const SymmetricSequence& t_star,
                               const SymmetricSequence& h_star, const SolverOptions& options) {
  const CertifiedValue cv = in_cone_P(h_star, p.grid, options.eps_pd);
  const double m = cv.lower_bound();
  if (m >= 0.0) return OmegaCertificate{delta, t_star, h_star, 0.0, cv};
  const double s = -m;
  SymmetricSequence h = h_star + SymmetricSequence::delta(p.dim()).scaled(s);
  return OmegaCertificate{delta - s, t_star, std::move(h), s, cv};
}

double weak_duality_tolerance(const ReveszProblem& p, const SolverOptions& options) {
  return 2.0 * options.eps_pd * (1.0 + p.r.l1_norm()) + 1e-7;
}

DualityBracket run_bracket(const ReveszProblem& p, std::span<const std::int64_t> schedule,
                           const SolverOptions& options, unsigned workers) {
  if (schedule.empty()) throw std::invalid_argument("run_bracket: empty refinement schedule");
  std::vector<BracketLevel> levels(schedule.size());
  parallel_for(schedule.size(), workers, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    const ReveszProblem level = p.with_grid(TorusGrid(p.dim(), schedule[i]));
    const AlphaRelaxed ar = solve_alpha_relaxed(level, options);
    const AlphaCertificate ac = certify_alpha(level, ar.f_star, ar.value, options);
    const OmegaRelaxed orx = solve_omega_relaxed(level, options);
    const OmegaCertificate oc = certify_omega(level, orx.value, orx.t_star, orx.h_star, options);
    BracketLevel& out = levels[i];
    out = BracketLevel{schedule[i], ar.value, ac.value, orx.value, oc.value, ac.value - oc.value,
                       0.0, 0.0, 0.0, ac.deficit, oc.deficit, ar.lp_iterations + orx.lp_iterations, 0.0,
                       ac.witness, oc.t, oc.h};
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });

  DualityBracket bracket{{}, kInfinity, -kInfinity, weak_duality_tolerance(p, options)};
  for (auto& level : levels) {
    if (level.omega_certified > level.alpha_certified + bracket.tolerance) {
      throw SoundnessViolation("weak duality violated at G=" + std::to_string(level.points_per_axis) +
                               ": omega_certified=" + std::to_string(level.omega_certified) +
                               " > alpha_certified=" + std::to_string(level.alpha_certified));
    }
    bracket.alpha_certified = std::min(bracket.alpha_certified, level.alpha_certified);
    bracket.omega_certified = std::max(bracket.omega_certified, level.omega_certified);
    if (bracket.omega_certified > bracket.alpha_certified + bracket.tolerance) {
      throw SoundnessViolation("weak duality violated across levels: omega_certified=" +
                               std::to_string(bracket.omega_certified) +
                               " > alpha_certified=" + std::to_string(bracket.alpha_certified));
    }
    level.best_alpha_certified = bracket.alpha_certified;
    level.best_omega_certified = bracket.omega_certified;
    level.best_gap = bracket.gap();
  }
  bracket.levels = std::move(levels);
  return bracket;
}

}  // namespace conedual
