#pragma once

#include <atomic>
#include <cmath>

#include "pf/params.hpp"
#include "pf/vec.hpp"

namespace pf {

// Distances below this guard are treated as inside the clamp for attraction
// and evaluated at the guard distance for repulsion, so near-coincident
// points cannot overflow the d^-(alpha+2) repulsion force.
inline constexpr double kDistanceGuard = 1e-12;

// Counts guarded near-coincident evaluations. Safe to share across threads.
struct EvalDiagnostics {
  std::atomic<long long> guard_hits{0};
};

// Value and radial derivative d(psi)/d(distance) of a pair potential.
struct RadialTerm {
  double value = 0.0;
  double slope = 0.0;
};

// Attraction potential: -1/delta^a inside the clamp radius, -1/d^a outside.
// The boundary d == delta uses the outside branch (values coincide there).
// alpha == 0 is the constant-force variant: 0 inside, d - delta outside.
inline RadialTerm pfml_att_radial(double d, const FieldParams& p) {
  if (p.alpha == 0.0) {
    if (d < p.delta_att) return {0.0, 0.0};
    return {d - p.delta_att, 1.0};
  }
  if (d < p.delta_att) return {-std::pow(p.delta_att, -p.alpha), 0.0};
  return {-std::pow(d, -p.alpha), p.alpha * std::pow(d, -p.alpha - 1.0)};
}

// Repulsion potential: 1/d^a inside the cutoff radius, the constant
// 1/delta^a outside. alpha == 0 variant: delta - d inside, 0 outside.
inline RadialTerm pfml_rep_radial(double d, const FieldParams& p) {
  if (p.alpha == 0.0) {
    if (d < p.delta_rep) return {p.delta_rep - d, -1.0};
    return {0.0, 0.0};
  }
  if (d < p.delta_rep) return {std::pow(d, -p.alpha), -p.alpha * std::pow(d, -p.alpha - 1.0)};
  return {std::pow(p.delta_rep, -p.alpha), 0.0};
}

// Contrastive attraction: delta^2 inside the clamp, d^2 outside. Interaction
// strength grows with distance; this is the anti-decay baseline.
inline RadialTerm cpml_att_radial(double d, double delta) {
  if (d < delta) return {delta * delta, 0.0};
  return {d * d, 2.0 * d};
}

// Contrastive repulsion: squared hinge (delta - d)^2 inside, 0 outside.
// Value and first derivative are both continuous at the cutoff.
inline RadialTerm cpml_rep_radial(double d, double delta) {
  if (d < delta) {
    const double gap = delta - d;
    return {gap * gap, -2.0 * gap};
  }
  return {0.0, 0.0};
}

inline RadialTerm pair_radial(double d, const PotentialKernel& kernel, Interaction which,
                              EvalDiagnostics* diag = nullptr) {
  if (d < kDistanceGuard) {
    if (diag) diag->guard_hits.fetch_add(1, std::memory_order_relaxed);
    d = (which == Interaction::Att) ? 0.0 : kDistanceGuard;
  }
  if (kernel.kind == KernelKind::PFML) {
    return which == Interaction::Att ? pfml_att_radial(d, kernel.params)
                                     : pfml_rep_radial(d, kernel.params);
  }
  return which == Interaction::Att ? cpml_att_radial(d, kernel.params.delta_att)
                                   : cpml_rep_radial(d, kernel.params.delta_rep);
}

inline double psi_att(const Vec& r, const Vec& z, const PotentialKernel& kernel,
                      EvalDiagnostics* diag = nullptr) {
  require_same_dim(r, z, "psi_att");
  if (kernel.kind != KernelKind::PFML)
    throw std::invalid_argument("psi_att: PFML kernel required (CPML uses psi_att_star)");
  return pair_radial(distance(r, z), kernel, Interaction::Att, diag).value;
}

inline double psi_rep(const Vec& r, const Vec& z, const PotentialKernel& kernel,
                      EvalDiagnostics* diag = nullptr) {
  require_same_dim(r, z, "psi_rep");
  if (kernel.kind != KernelKind::PFML)
    throw std::invalid_argument("psi_rep: PFML kernel required (CPML uses psi_rep_star)");
  return pair_radial(distance(r, z), kernel, Interaction::Rep, diag).value;
}

// Force exerted at r by a source at z: -grad_r psi. Accumulated into acc.
inline void accumulate_pair_force(Vec& acc, const Vec& r, const Vec& z,
                                  const PotentialKernel& kernel, Interaction which,
                                  EvalDiagnostics* diag = nullptr) {
  const double d = distance(r, z);
  const RadialTerm t = pair_radial(d, kernel, which, diag);
  if (t.slope == 0.0 || d == 0.0) return;
  // f = -slope * (r - z) / d, built from the unit direction so no
  // intermediate can overflow.
  for (std::size_t i = 0; i < r.size(); ++i) acc[i] += -t.slope * ((r[i] - z[i]) / d);
}

inline Vec force_pair(const Vec& r, const Vec& z, const PotentialKernel& kernel,
                      Interaction which, EvalDiagnostics* diag = nullptr) {
  require_same_dim(r, z, "force_pair");
  Vec f(r.size(), 0.0);
  accumulate_pair_force(f, r, z, kernel, which, diag);
  return f;
}

}  // namespace pf
