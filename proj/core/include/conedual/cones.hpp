#pragma once

// Membership and certification for the cones P (nonnegative cosine
// polynomials) and P⁺ (positive definite sequences), and the decomposition
// φ = g + h witnessing φ ∈ C⁺ + P⁺ = (C ∩ P)⁺ on Z.

#include <optional>
#include <string_view>

#include "conedual/lp.hpp"
#include "conedual/seqcore.hpp"
#include "conedual/trig.hpp"

namespace conedual {

enum class PdMethod { kL1Bound, kGridCertificate };
std::string_view to_string(PdMethod method);

struct PdStatus {
  // For kL1Bound the certificate carries the ℓ¹ bound itself as grid_min
  // with zero margin and no grid point.
  CertifiedValue certified;
  PdMethod method = PdMethod::kGridCertificate;

  bool is_certified() const { return certified.certified(); }
  bool is_refuted() const { return certified.refuted(); }
};

// Finitely supported h is positive definite iff ĥ >= 0 on T^d.
PdStatus is_positive_definite(const SymmetricSequence& h, const TorusGrid& grid,
                              double eps_pd = kDefaultEpsPd);

// certified_min with the margin tightened by the ℓ¹ bound when that is better.
CertifiedValue in_cone_P(const SymmetricSequence& f, const TorusGrid& grid, double eps_pd = kDefaultEpsPd);

struct Decomposition {
  SymmetricSequence g;  // entrywise >= 0 (the cone C⁺ on Z)
  SymmetricSequence h;  // PD-certified
  PdStatus h_status;
  double slack = 0.0;   // min over grid of ĥ achieved by the LP
};

struct DecomposeOptions {
  double eps_pd = kDefaultEpsPd;
  double slack_cap = 1.0;
  LpTolerances lp;
};

/// Searches g >= 0 on {|n| <= window_half_width} with h = φ - g and ĥ >= 0 on
/// the grid, then certifies h. d = 1 only. An empty result means "not found
/// at this window and grid", not φ ∉ (C ∩ P)⁺.
std::optional<Decomposition> decompose_dual(const SymmetricSequence& phi, int window_half_width,
                                            const TorusGrid& grid, const DecomposeOptions& options = {});

}  // namespace conedual
