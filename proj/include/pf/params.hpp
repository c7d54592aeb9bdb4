#pragma once

#include <stdexcept>

namespace pf {

enum class KernelKind { PFML, CPML };
enum class Interaction { Att, Rep };

// Pair-potential hyperparameters. delta_att is the attraction clamp radius,
// delta_rep the repulsion cutoff; they coincide except in the
// repulsion-range ablation. alpha is the decay exponent; alpha == 0 selects
// the constant-force variant (see kernel.hpp).
struct FieldParams {
  double delta_att = 0.2;
  double delta_rep = 0.2;
  double alpha = 4.0;

  void validate() const {
    if (!(delta_att > 0.0)) throw std::invalid_argument("FieldParams: delta_att must be > 0");
    if (!(delta_rep > 0.0)) throw std::invalid_argument("FieldParams: delta_rep must be > 0");
    if (!(alpha >= 0.0)) throw std::invalid_argument("FieldParams: alpha must be >= 0");
  }
};

// Parameters of the contrastive baseline kernel: a single clamp radius,
// shared by attraction and repulsion.
struct CpmlParams {
  double delta = 0.2;

  void validate() const {
    if (!(delta > 0.0)) throw std::invalid_argument("CpmlParams: delta must be > 0");
  }
};

struct PotentialKernel {
  KernelKind kind = KernelKind::PFML;
  FieldParams params;
};

inline PotentialKernel make_pfml_kernel(double delta, double alpha) {
  return PotentialKernel{KernelKind::PFML, FieldParams{delta, delta, alpha}};
}

inline PotentialKernel make_pfml_kernel(const FieldParams& p) {
  return PotentialKernel{KernelKind::PFML, p};
}

// CPML reuses the FieldParams slots: delta_att for the attraction clamp,
// delta_rep for the repulsion hinge. With the default delta_rep == delta_att
// this is exactly the single-delta baseline.
inline PotentialKernel make_cpml_kernel(const CpmlParams& p) {
  return PotentialKernel{KernelKind::CPML, FieldParams{p.delta, p.delta, 0.0}};
}

}  // namespace pf
