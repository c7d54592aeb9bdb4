#pragma once

#include <cmath>

#include "pf/field.hpp"

namespace pf {

struct DescentOptions {
  double tol = 1e-8;        // stop when the force norm falls below this
  int max_iters = 5000;
  double max_step = 0.0;    // cap on displacement per iteration; 0 = delta_att / 2
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double grow = 2.0;
  double min_step = 1e-14;  // give up once the trial displacement shrinks below this
};

struct DescentResult {
  Vec point;
  bool converged = false;
  int iters = 0;
  double force_norm = 0.0;
};

// Gradient descent with backtracking line search on Psi_class. The probe is
// not a snapshot member, so no entity is excluded. The field has derivative
// kinks at the clamp radii; descent then stalls at the kink with the step
// size underflowing, which is reported as converged = false while the point
// itself still sits at the minimum. The per-iteration displacement cap keeps
// the search from jumping across a potential ridge into another basin.
inline DescentResult find_local_minimum(const ChargeSnapshot& snap, int class_id,
                                        const PotentialKernel& kernel, Vec start,
                                        const DescentOptions& opt = {}) {
  DescentResult res;
  res.point = std::move(start);
  const double max_step = opt.max_step > 0.0 ? opt.max_step : 0.5 * kernel.params.delta_att;
  double value = class_potential(res.point, class_id, snap, kernel);
  double t = max_step;
  for (res.iters = 0; res.iters < opt.max_iters; ++res.iters) {
    const Vec force = class_force(res.point, class_id, snap, kernel);
    res.force_norm = norm(force);
    if (res.force_norm < opt.tol) {
      res.converged = true;
      return res;
    }
    // Trial displacement of length min(t, max_step) along the force.
    bool accepted = false;
    while (t * res.force_norm >= opt.min_step) {
      const double step_len = std::min(t * res.force_norm, max_step);
      const double c = step_len / res.force_norm;
      Vec trial = res.point;
      add_scaled(trial, c, force);
      const double trial_value = class_potential(trial, class_id, snap, kernel);
      if (trial_value <= value - opt.armijo_c * step_len * res.force_norm) {
        res.point = std::move(trial);
        value = trial_value;
        t *= opt.grow;
        accepted = true;
        break;
      }
      t *= opt.shrink;
    }
    if (!accepted) return res;  // step size underflow: a kink minimum
  }
  return res;
}

}  // namespace pf
