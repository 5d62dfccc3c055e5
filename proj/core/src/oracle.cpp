#include "conedual/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "conedual/error.hpp"
#include "conedual/parallel.hpp"

namespace conedual {

namespace {

// Grid indices 0..G/2 ordered coarse-to-fine so violations surface early.
std::vector<std::int64_t> coarse_to_fine(std::int64_t g) {
  std::vector<bool> seen(static_cast<std::size_t>(g / 2 + 1), false);
  std::vector<std::int64_t> order;
  auto visit = [&](std::int64_t j) {
    if (!seen[static_cast<std::size_t>(j)]) {
      seen[static_cast<std::size_t>(j)] = true;
      order.push_back(j);
    }
  };
  visit(0);
  visit(g / 2);
  for (std::int64_t step = g / 4; step >= 1; step /= 2) {
    for (std::int64_t j = step; j < g / 2; j += 2 * step) visit(j);
  }
  for (std::int64_t j = 0; j <= g / 2; ++j) visit(j);
  return order;
}

}  // namespace

std::int64_t ParamRange::count() const {
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("ParamRange: need step > 0 and hi >= lo");
  return static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

SweepResult sweep_optimize(const SweepSpec& spec, unsigned workers) {
  if (spec.ranges.empty()) throw std::invalid_argument("sweep_optimize: no parameters");
  if (!spec.build && !spec.build_coefficients) throw std::invalid_argument("sweep_optimize: no builder");
  std::vector<std::int64_t> counts;
  double total_d = 1.0;
  std::int64_t total = 1;
  for (const auto& r : spec.ranges) {
    counts.push_back(r.count());
    total_d *= static_cast<double>(counts.back());
    if (total_d > static_cast<double>(spec.cap)) {
      throw SweepCapExceeded("sweep_optimize: sweep size exceeds cap of " + std::to_string(spec.cap));
    }
    total *= counts.back();
  }

  const std::int64_t g = spec.grid_points;
  if (spec.feasibility == SweepFeasibility::kNonnegOnGrid && g < 4) {
    throw std::invalid_argument("sweep_optimize: grid needs at least 4 points");
  }
  const auto order = spec.feasibility == SweepFeasibility::kNonnegOnGrid ? coarse_to_fine(g) : std::vector<std::int64_t>{};
  std::vector<double> cos_table(static_cast<std::size_t>(std::max<std::int64_t>(g, 1)));
  for (std::int64_t k = 0; k < g; ++k) {
    cos_table[static_cast<std::size_t>(k)] = std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(g));
  }

  auto point_at = [&](std::int64_t flat) {
    std::vector<double> p(counts.size());
    for (std::size_t i = counts.size(); i-- > 0;) {
      p[i] = spec.ranges[i].value(flat % counts[i]);
      flat /= counts[i];
    }
    return p;
  };

  auto nonneg_on_grid = [&](double f0, std::span<const std::int64_t> ks, std::span<const double> cs) {
    for (const std::int64_t j : order) {
      double s = f0;
      for (std::size_t t = 0; t < ks.size(); ++t) s += cs[t] * cos_table[static_cast<std::size_t>((ks[t] * j) % g)];
      if (s < -spec.tolerance) return false;
    }
    return true;
  };

  auto feasible = [&](const SymmetricSequence& f) {
    if (spec.feasibility == SweepFeasibility::kAlways) return true;
    if (f.dim() != 1) throw DimensionMismatch("sweep_optimize: grid feasibility is one-dimensional");
    std::vector<std::int64_t> ks;
    std::vector<double> cs;
    for (const auto& [n, v] : f.entries()) {
      if (n.is_zero()) continue;
      ks.push_back(n[0]);
      cs.push_back(2.0 * v);
    }
    return nonneg_on_grid(f.at_zero(), ks, cs);
  };

  const bool dense = static_cast<bool>(spec.build_coefficients);
  if (dense && spec.objective_weights.dim() != 1) {
    throw DimensionMismatch("sweep_optimize: coefficient builder needs 1-D objective weights");
  }
  const std::vector<double> weights = dense ? spec.objective_weights.coefficients() : std::vector<double>{};

  // Dense path: returns false when the point cannot improve on `best`.
  auto dense_candidate = [&](std::span<const double> p, const std::optional<double>& best, double& obj,
                             std::vector<double>& c, std::vector<std::int64_t>& ks, std::vector<double>& cs) {
    spec.build_coefficients(p, c);
    if (c.empty()) throw std::invalid_argument("sweep_optimize: empty coefficient vector");
    obj = 0.0;
    for (std::size_t k = 0; k < std::min(c.size(), weights.size()); ++k) obj += (k == 0 ? 1.0 : 2.0) * c[k] * weights[k];
    if (best && obj >= *best) return false;
    if (spec.feasibility == SweepFeasibility::kAlways) return true;
    ks.clear();
    cs.clear();
    for (std::size_t k = 1; k < c.size(); ++k) {
      if (c[k] == 0.0) continue;
      ks.push_back(static_cast<std::int64_t>(k));
      cs.push_back(2.0 * c[k]);
    }
    return nonneg_on_grid(c[0], ks, cs);
  };

  const unsigned chunks = std::max(1u, workers);
  struct Local {
    std::optional<double> value;
    std::int64_t index = -1;
  };
  std::vector<Local> locals(chunks);
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::int64_t begin = total * static_cast<std::int64_t>(c) / chunks;
    const std::int64_t end = total * static_cast<std::int64_t>(c + 1) / chunks;
    Local& best = locals[c];
    std::vector<double> coeffs;
    std::vector<std::int64_t> ks;
    std::vector<double> cs;
    for (std::int64_t flat = begin; flat < end; ++flat) {
      const auto p = point_at(flat);
      if (dense) {
        double obj = 0.0;
        if (!dense_candidate(p, best.value, obj, coeffs, ks, cs)) continue;
        best.value = obj;
        best.index = flat;
        continue;
      }
      const SymmetricSequence f = spec.build(p);
      const double obj = pairing(f, spec.objective_weights);
      if (best.value && obj >= *best.value) continue;
      if (!feasible(f)) continue;
      best.value = obj;
      best.index = flat;
    }
  });

  SweepResult out;
  out.points = total;
  std::int64_t best_index = -1;
  for (const auto& l : locals) {
    if (!l.value) continue;
    if (!out.best_value || *l.value < *out.best_value) {
      out.best_value = l.value;
      best_index = l.index;
    }
  }
  if (best_index >= 0) out.best_point = point_at(best_index);
  return out;
}

bool toeplitz_necessary_check(const SymmetricSequence& h, int order, double tolerance) {
  if (h.dim() != 1) throw DimensionMismatch("toeplitz_necessary_check: d = 1 only");
  if (order < 0) throw std::invalid_argument("toeplitz_necessary_check: order must be >= 0");
  const std::size_t n = static_cast<std::size_t>(order) + 1;
  std::vector<double> a(n * n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const int k = static_cast<int>(i > j ? i - j : j - i);
      a[i * n + j] = h.value_at(k);
      scale = std::max(scale, std::abs(a[i * n + j]));
    }
  }
  const double tol = tolerance * std::max(1.0, scale);
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t p = n;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i] && a[i * n + i] > best) {
        best = a[i * n + i];
        p = i;
      }
    }
    if (best < -tol) return false;
    if (best <= tol) {
      // Remaining block must vanish for a PSD matrix with ~zero diagonal.
      for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (!done[j] && std::abs(a[i * n + j]) > std::sqrt(tol * std::max(1.0, scale))) return false;
        }
      }
      return true;
    }
    done[p] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const double f = a[i * n + p] / best;
      for (std::size_t j = 0; j < n; ++j) {
        if (!done[j]) a[i * n + j] -= f * a[p * n + j];
      }
    }
  }
  return true;
}

}  // namespace conedual
