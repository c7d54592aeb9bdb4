#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pf/kernel.hpp"
#include "pf/parallel.hpp"
#include "pf/snapshot.hpp"

namespace pf {

inline constexpr int kNoExclude = -1;

// Class potential field Psi_j(r): attraction from class-j sources, repulsion
// from every other source. Self-interaction is skipped via exclude_entity so
// per-entity energies carry no constant offset. Sources are reduced in
// ascending entity_id order.
inline double class_potential(const Vec& r, int class_id, const ChargeSnapshot& snap,
                              const PotentialKernel& kernel, int exclude_entity = kNoExclude,
                              EvalDiagnostics* diag = nullptr) {
  double sum = 0.0;
  for (const ChargeEntity& e : snap.entities) {
    if (e.entity_id == exclude_entity) continue;
    const Interaction which = (e.class_id == class_id) ? Interaction::Att : Interaction::Rep;
    sum += pair_radial(distance(r, e.position), kernel, which, diag).value;
  }
  return sum;
}

// Net force at r under Psi_class: -grad_r of class_potential wherever the
// field is differentiable.
inline Vec class_force(const Vec& r, int class_id, const ChargeSnapshot& snap,
                       const PotentialKernel& kernel, int exclude_entity = kNoExclude,
                       EvalDiagnostics* diag = nullptr) {
  Vec f(r.size(), 0.0);
  for (const ChargeEntity& e : snap.entities) {
    if (e.entity_id == exclude_entity) continue;
    const Interaction which = (e.class_id == class_id) ? Interaction::Att : Interaction::Rep;
    accumulate_pair_force(f, r, e.position, kernel, which, diag);
  }
  return f;
}

// Total potential energy: every sample and every proxy evaluated under its
// own class field, self-excluded. Each unordered pair therefore contributes
// its symmetric pair potential twice.
inline double total_energy(const ChargeSnapshot& snap, const PotentialKernel& kernel,
                           EvalDiagnostics* diag = nullptr) {
  double u = 0.0;
  for (const ChargeEntity& e : snap.entities)
    u += class_potential(e.position, e.class_id, snap, kernel, e.entity_id, diag);
  return u;
}

enum class ForceMode {
  // Class force at each entity with that entity excluded as a source;
  // sources are treated as fixed.
  ForceSemantics,
  // -grad of total_energy w.r.t. every entity position: both roles of each
  // entity are differentiated, which doubles every pair contribution.
  FullGradient,
};

// Forces on all entities, returned parallel to snap.entities (ascending
// entity_id). ForceSemantics parallelizes over entities; FullGradient runs
// sequentially because it scatters reaction terms.
inline std::vector<Vec> batch_forces(const ChargeSnapshot& snap, const PotentialKernel& kernel,
                                     ForceMode mode, EvalDiagnostics* diag = nullptr) {
  const std::size_t n = snap.entities.size();
  std::vector<Vec> out(n, Vec(snap.dim(), 0.0));
  if (mode == ForceMode::ForceSemantics) {
    parallel_for(n, [&](std::size_t i) {
      const ChargeEntity& e = snap.entities[i];
      out[i] = class_force(e.position, e.class_id, snap, kernel, e.entity_id, diag);
    });
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const ChargeEntity& ei = snap.entities[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const ChargeEntity& ej = snap.entities[j];
      const Interaction which =
          (ei.class_id == ej.class_id) ? Interaction::Att : Interaction::Rep;
      Vec f(snap.dim(), 0.0);
      accumulate_pair_force(f, ei.position, ej.position, kernel, which, diag);
      for (std::size_t k = 0; k < f.size(); ++k) {
        out[i][k] += f[k];
        out[j][k] -= f[k];  // reaction term from i's evaluation of pair (i,j)
      }
    }
  }
  return out;
}

struct GridBounds {
  double xmin = 0.0, xmax = 1.0;
  double ymin = 0.0, ymax = 1.0;
};

// Psi_class sampled on a regular 2-D grid. Values are row-major with y as
// the row index: psi[iy * resolution + ix] is the field at
//   x = xmin + ix * (xmax - xmin) / (resolution - 1)
//   y = ymin + iy * (ymax - ymin) / (resolution - 1).
struct FieldGrid {
  GridBounds bounds;
  int resolution = 0;
  int class_id = 0;
  std::vector<double> psi;

  double x_at(int ix) const {
    return bounds.xmin + ix * (bounds.xmax - bounds.xmin) / (resolution - 1);
  }
  double y_at(int iy) const {
    return bounds.ymin + iy * (bounds.ymax - bounds.ymin) / (resolution - 1);
  }
};

inline FieldGrid field_grid(const ChargeSnapshot& snap, const PotentialKernel& kernel,
                            int class_id, const GridBounds& bounds, int resolution,
                            EvalDiagnostics* diag = nullptr) {
  if (!snap.entities.empty() && snap.dim() != 2)
    throw std::invalid_argument("field_grid: unsupported dimension (2-D snapshots only)");
  if (resolution < 2) throw std::invalid_argument("field_grid: resolution must be >= 2");
  FieldGrid grid;
  grid.bounds = bounds;
  grid.resolution = resolution;
  grid.class_id = class_id;
  grid.psi.assign(static_cast<std::size_t>(resolution) * resolution, 0.0);
  if (snap.entities.empty()) return grid;
  parallel_for(grid.psi.size(), [&](std::size_t cell) {
    const int iy = static_cast<int>(cell) / resolution;
    const int ix = static_cast<int>(cell) % resolution;
    const Vec r{grid.x_at(ix), grid.y_at(iy)};
    grid.psi[cell] = class_potential(r, class_id, snap, kernel, kNoExclude, diag);
  });
  return grid;
}

}  // namespace pf
