#include "conedual/cones.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conedual/error.hpp"

namespace conedual {

std::string_view to_string(PdMethod method) {
  return method == PdMethod::kL1Bound ? "L1_BOUND" : "GRID_CERTIFICATE";
}

PdStatus is_positive_definite(const SymmetricSequence& h, const TorusGrid& grid, double eps_pd) {
  if (h.dim() != grid.dim()) throw DimensionMismatch("is_positive_definite: grid dimension");
  const double bound = l1_lower_bound(h);
  PdStatus out;
  if (bound >= 0.0) {
    out.method = PdMethod::kL1Bound;
    out.certified.grid_min = bound;
    out.certified.margin = 0.0;
    out.certified.eps_pd = eps_pd;
    out.certified.status = CertStatus::kCertifiedNonneg;
    return out;
  }
  out.method = PdMethod::kGridCertificate;
  out.certified = certified_min(h, grid, eps_pd);
  return out;
}

CertifiedValue in_cone_P(const SymmetricSequence& f, const TorusGrid& grid, double eps_pd) {
  CertifiedValue cv = certified_min(f, grid, eps_pd);
  const double l1 = l1_lower_bound(f);
  if (l1 > cv.lower_bound()) {
    cv.margin = std::max(0.0, cv.grid_min - l1);
    cv.status = classify_certificate(cv.grid_min, cv.margin, eps_pd);
  }
  return cv;
}

std::optional<Decomposition> decompose_dual(const SymmetricSequence& phi, int window_half_width,
                                            const TorusGrid& grid, const DecomposeOptions& options) {
  if (phi.dim() != 1 || grid.dim() != 1) {
    throw std::invalid_argument("decompose_dual: only d = 1 is supported");
  }
  if (window_half_width < 0 || phi.support_radius() > window_half_width) {
    throw std::invalid_argument("decompose_dual: window does not contain the support of phi");
  }
  const std::size_t k_max = static_cast<std::size_t>(window_half_width);
  const std::vector<double> phi_c = phi.coefficients(k_max + 1);

  // Variables: g(0..K), then the slack τ.
  const std::size_t nv = k_max + 2;
  const std::size_t tau = k_max + 1;
  LinearProgram lp(nv, Sense::kMaximize);
  lp.objective[tau] = 1.0;
  for (std::size_t k = 0; k <= k_max; ++k) lp.set_bounds(k, 0.0, kInfinity);
  lp.set_bounds(tau, -kInfinity, options.slack_cap);

  std::vector<MultiIndex> support;
  for (std::size_t k = 1; k <= k_max; ++k) support.push_back(MultiIndex{static_cast<int>(k)});
  const auto reps = grid.symmetric_representatives();
  const auto cosines = cosine_matrix(support, grid, reps);
  // φ̂(x) - ĝ(x) - τ >= 0
  for (std::size_t p = 0; p < reps.size(); ++p) {
    std::vector<double> row(nv, 0.0);
    double phi_hat = phi_c[0];
    row[0] = -1.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
      const double c = cosines[p * k_max + (k - 1)];
      row[k] = -2.0 * c;
      phi_hat += 2.0 * phi_c[k] * c;
    }
    row[tau] = -1.0;
    lp.add_constraint(std::move(row), Relation::kGreaterEqual, -phi_hat);
  }

  const LpOutcome outcome = solve(lp, options.lp);
  if (outcome.status != LpStatus::kOptimal) return std::nullopt;
  const double slack = outcome.x[tau];
  if (slack < -options.eps_pd) return std::nullopt;

  // g >= 0 exactly, and h = φ - g with fl(g + h) == φ entrywise.
  // LP round-off below `noise` is dropped from g; h is re-certified below anyway.
  double noise = 1.0;
  for (const double v : phi_c) noise = std::max(noise, std::abs(v));
  noise *= 1e-14;
  std::vector<double> g_c(k_max + 1), h_c(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) {
    double g = outcome.x[k] > noise ? outcome.x[k] : 0.0;
    double h = phi_c[k] - g;
    for (int attempt = 0; attempt < 64 && g + h != phi_c[k]; ++attempt) {
      g = std::nextafter(g, 0.0);
      h = phi_c[k] - g;
    }
    if (g + h != phi_c[k]) {
      g = 0.0;
      h = phi_c[k];
    }
    g_c[k] = g;
    h_c[k] = h;
  }

  Decomposition d{SymmetricSequence::from_coefficients(g_c), SymmetricSequence::from_coefficients(h_c), {}, slack};
  d.h_status = is_positive_definite(d.h, grid, options.eps_pd);
  if (!d.h_status.is_certified()) return std::nullopt;
  return d;
}

}  // namespace conedual
