#pragma once

#include "pf/field.hpp"
#include "pf/kernel.hpp"

namespace pf {

// Contrastive-potential baseline behind the same field assembly as the
// decaying kernel. Attraction follows the classical contrastive pull,
// growing quadratically with distance; repulsion is the squared hinge.

inline double psi_att_star(const Vec& r, const Vec& z, const CpmlParams& p) {
  require_same_dim(r, z, "psi_att_star");
  return cpml_att_radial(distance(r, z), p.delta).value;
}

inline double psi_rep_star(const Vec& r, const Vec& z, const CpmlParams& p) {
  require_same_dim(r, z, "psi_rep_star");
  return cpml_rep_radial(distance(r, z), p.delta).value;
}

inline Vec force_pair_star(const Vec& r, const Vec& z, const CpmlParams& p, Interaction which,
                           EvalDiagnostics* diag = nullptr) {
  return force_pair(r, z, make_cpml_kernel(p), which, diag);
}

// Identical field-assembly semantics as total_energy with the contrastive
// pair potentials substituted.
inline double cpml_total_energy(const ChargeSnapshot& snap, const CpmlParams& p,
                                EvalDiagnostics* diag = nullptr) {
  return total_energy(snap, make_cpml_kernel(p), diag);
}

}  // namespace pf
