#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "pf/cpml.hpp"
#include "pf/descent.hpp"
#include "pf/field.hpp"
#include "pf/metrics.hpp"
#include "pf/rng.hpp"

namespace pf {

// Central finite differences of the class potential. Shares only the
// potential-value path with the analytic force, so it is an independent
// oracle for the slope path.
inline Vec fd_class_force(const Vec& r, int class_id, const ChargeSnapshot& snap,
                          const PotentialKernel& kernel, int exclude_entity = kNoExclude,
                          double h_base = 1e-6) {
  const double h = h_base * std::max(1.0, norm(r));
  Vec g(r.size(), 0.0);
  Vec probe = r;
  for (std::size_t i = 0; i < r.size(); ++i) {
    probe[i] = r[i] + h;
    const double up = class_potential(probe, class_id, snap, kernel, exclude_entity);
    probe[i] = r[i] - h;
    const double dn = class_potential(probe, class_id, snap, kernel, exclude_entity);
    probe[i] = r[i];
    g[i] = -(up - dn) / (2.0 * h);
  }
  return g;
}

// Cancellation noise of the central difference: the potential's magnitude
// times machine epsilon, divided by the step, accumulated over coordinates.
// Forces below this scale cannot be distinguished from FD roundoff.
inline double fd_noise_scale(const Vec& r, int class_id, const ChargeSnapshot& snap,
                             const PotentialKernel& kernel, double h_base = 1e-6) {
  const double h = h_base * std::max(1.0, norm(r));
  const double psi = std::fabs(class_potential(r, class_id, snap, kernel));
  return 32.0 * 1e-16 * (1.0 + psi) * std::sqrt(static_cast<double>(r.size())) / (2.0 * h);
}

// Relative force error against the FD oracle, floored at the FD noise scale
// so exact-zero plateau forces compare against roundoff, not against zero.
inline double force_rel_error(const Vec& analytic, const Vec& fd, double noise_floor) {
  const double diff = distance(analytic, fd);
  return diff / std::max({norm(analytic), norm(fd), noise_floor});
}

struct GradCheckReport {
  int cases = 0;
  int entities_checked = 0;
  double max_rel_error_pfml = 0.0;
  double max_rel_error_cpml = 0.0;
  double max_rel_error() const { return std::max(max_rel_error_pfml, max_rel_error_cpml); }
};

// Random multi-class snapshot with every pair distance at least `margin`
// away from both clamp radii (and from zero), so the field is smooth at all
// evaluation points.
inline ChargeSnapshot random_margin_snapshot(int dim, const FieldParams& p, std::mt19937_64& rng,
                                             double margin = 1e-3) {
  std::uniform_int_distribution<int> n_dist(4, 10);
  std::uniform_int_distribution<int> c_dist(2, 3);
  std::uniform_real_distribution<double> log_scale(-0.6, 0.7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int attempt = 0; attempt < 500; ++attempt) {
    const int n = n_dist(rng);
    const int num_classes = c_dist(rng);
    const double spread =
        p.delta_att * std::pow(10.0, log_scale(rng)) * std::sqrt(3.0 / (2.0 * dim));
    std::vector<Vec> pts(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(dim)));
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (double& x : pts[static_cast<std::size_t>(i)]) x = spread * unit(rng);
      labels[static_cast<std::size_t>(i)] = i % num_classes;
    }
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = i + 1; j < n && ok; ++j) {
        const double d = distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
        if (d < margin || std::fabs(d - p.delta_att) < margin ||
            std::fabs(d - p.delta_rep) < margin)
          ok = false;
      }
    }
    if (ok) return make_snapshot(pts, labels, num_classes, {}, 0);
  }
  throw std::runtime_error("random_margin_snapshot: could not satisfy distance margins");
}

// Analytic ForceSemantics forces vs the FD oracle over random snapshots with
// D in {2, 8, 64} and alpha in {1, 2, 4}, for both kernels.
inline GradCheckReport gradient_check(int cases_per_combo, std::uint64_t seed,
                                      double margin = 1e-3) {
  GradCheckReport report;
  const int dims[] = {2, 8, 64};
  const double alphas[] = {1.0, 2.0, 4.0};
  std::uint64_t case_index = 0;
  for (int dim : dims) {
    for (double alpha : alphas) {
      for (int rep = 0; rep < cases_per_combo; ++rep) {
        auto rng = substream(seed, "gradcheck", case_index++);
        std::uniform_real_distribution<double> delta_dist(0.12, 0.3);
        FieldParams params;
        params.delta_att = delta_dist(rng);
        params.delta_rep = (rep % 3 == 0) ? params.delta_att + 0.1 : params.delta_att;
        params.alpha = alpha;
        const ChargeSnapshot snap = random_margin_snapshot(dim, params, rng, margin);
        const PotentialKernel kernels[2] = {make_pfml_kernel(params),
                                            make_cpml_kernel(CpmlParams{params.delta_att})};
        for (const PotentialKernel& kernel : kernels) {
          const std::vector<Vec> forces = batch_forces(snap, kernel, ForceMode::ForceSemantics);
          for (std::size_t i = 0; i < snap.entities.size(); ++i) {
            const ChargeEntity& e = snap.entities[i];
            const Vec fd = fd_class_force(e.position, e.class_id, snap, kernel, e.entity_id);
            const double floor = fd_noise_scale(e.position, e.class_id, snap, kernel);
            const double rel = force_rel_error(forces[i], fd, floor);
            double& worst = kernel.kind == KernelKind::PFML ? report.max_rel_error_pfml
                                                            : report.max_rel_error_cpml;
            worst = std::max(worst, rel);
            ++report.entities_checked;
          }
        }
        ++report.cases;
      }
    }
  }
  return report;
}

struct DoubleCountReport {
  int cases = 0;
  double max_rel_deviation = 0.0;  // of FullGradient vs 2 x ForceSemantics
};

// FullGradient accumulates each pair twice (action plus reaction), so it
// must equal twice the fixed-source force, componentwise.
inline DoubleCountReport double_count_check(int num_snapshots, std::uint64_t seed) {
  DoubleCountReport report;
  const int dims[] = {2, 8, 64};
  const double alphas[] = {1.0, 2.0, 4.0};
  for (int c = 0; c < num_snapshots; ++c) {
    auto rng = substream(seed, "doublecount", static_cast<std::uint64_t>(c));
    FieldParams params;
    params.delta_att = 0.2;
    params.delta_rep = 0.2;
    params.alpha = alphas[c % 3];
    const int dim = dims[(c / 3) % 3];
    const ChargeSnapshot snap = random_margin_snapshot(dim, params, rng, 1e-4);
    const PotentialKernel kernel = (c % 2 == 0)
                                       ? make_pfml_kernel(params)
                                       : make_cpml_kernel(CpmlParams{params.delta_att});
    const std::vector<Vec> fs = batch_forces(snap, kernel, ForceMode::ForceSemantics);
    const std::vector<Vec> fg = batch_forces(snap, kernel, ForceMode::FullGradient);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      for (std::size_t k = 0; k < fs[i].size(); ++k) {
        const double expect = 2.0 * fs[i][k];
        const double rel =
            std::fabs(fg[i][k] - expect) / std::max({std::fabs(expect), std::fabs(fg[i][k]), 1e-30});
        if (fg[i][k] == expect) continue;
        report.max_rel_deviation = std::max(report.max_rel_deviation, rel);
      }
    }
    ++report.cases;
  }
  return report;
}

struct Prop1PointReport {
  double dist = 0.0;             // descent endpoint's distance from its seed point
  bool within_delta = false;
  bool converged = false;        // force tolerance reached; kink minima stop with false
  bool settled = false;          // descent ended before exhausting iterations
  double radial_argmin = 0.0;    // 1-D argmin along the found direction, from the seed
  bool radial_within_delta = false;
  double cpml_dist_to_centroid = 0.0;
  bool cpml_converged = false;
};

struct Prop1Report {
  int n = 0;
  double alpha = 0.0;
  double delta = 0.0;
  double min_pairwise = 0.0;
  bool separation_hypothesis = false;  // delta < min_pairwise / (2 (1 + 1/n))
  double centroid_nearest_dist = 0.0;  // from the data centroid to its nearest point
  bool centroid_beyond_delta = false;
  std::vector<Prop1PointReport> per_point;

  bool all_within_delta() const {
    for (const auto& p : per_point)
      if (!p.within_delta) return false;
    return true;
  }
};

inline double min_pairwise_distance(const std::vector<Vec>& points) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::min(best, distance(points[i], points[j]));
  return best;
}

inline Vec centroid(const std::vector<Vec>& points) {
  Vec c(points.front().size(), 0.0);
  for (const Vec& p : points) add_scaled(c, 1.0, p);
  for (double& x : c) x /= static_cast<double>(points.size());
  return c;
}

// Existence bound on the clamp radius for n same-class points.
inline double prop1_delta_bound(double min_pairwise, std::size_t n) {
  return min_pairwise / (2.0 * (1.0 + 1.0 / static_cast<double>(n)));
}

// Numerical check of the radial-minimum claim: descend the attraction-only
// field from each point and report how far the endpoint moved; the same
// starts are descended under the contrastive field, which is expected to
// reach the centroid instead. Boundary minima sit exactly on the clamp
// radius, so "within delta" carries a 1e-6 relative allowance.
inline Prop1Report prop1_check(const std::vector<Vec>& points, double alpha,
                               std::optional<double> delta_opt = std::nullopt, double tol = 1e-8) {
  if (points.empty()) throw std::invalid_argument("prop1_check: need at least one point");
  Prop1Report report;
  report.n = static_cast<int>(points.size());
  report.alpha = alpha;
  report.min_pairwise =
      points.size() > 1 ? min_pairwise_distance(points) : std::numeric_limits<double>::infinity();
  const double bound =
      points.size() > 1 ? prop1_delta_bound(report.min_pairwise, points.size()) : 0.2;
  report.delta = delta_opt.value_or(0.9 * bound);
  report.separation_hypothesis = points.size() > 1 ? report.delta < bound : true;

  const ChargeSnapshot snap = points_snapshot(points);
  const PotentialKernel pfml = make_pfml_kernel(report.delta, alpha);
  const PotentialKernel cpml = make_cpml_kernel(CpmlParams{report.delta});
  const Vec center = centroid(points);
  report.centroid_nearest_dist = std::numeric_limits<double>::infinity();
  for (const Vec& p : points)
    report.centroid_nearest_dist = std::min(report.centroid_nearest_dist, distance(center, p));
  report.centroid_beyond_delta = report.centroid_nearest_dist > report.delta;

  const double within_tol = report.delta * (1.0 + 1e-6);
  for (const Vec& z : points) {
    Prop1PointReport pr;
    DescentOptions opt;
    opt.tol = tol;
    opt.max_iters = 20000;
    opt.max_step = 0.5 * report.delta;
    const DescentResult res = find_local_minimum(snap, 0, pfml, z, opt);
    pr.dist = distance(res.point, z);
    pr.within_delta = pr.dist <= within_tol;
    pr.converged = res.converged;
    pr.settled = res.converged || res.iters < opt.max_iters;

    // 1-D verification along the radial line the descent selected
    if (pr.dist > 1e-12) {
      Vec dir = sub(res.point, z);
      for (double& x : dir) x /= pr.dist;
      const int steps = 2000;
      double best_val = std::numeric_limits<double>::infinity();
      double best_t = 0.0;
      for (int s = 0; s <= steps; ++s) {
        const double t = 2.0 * report.delta * static_cast<double>(s) / steps;
        Vec probe = z;
        add_scaled(probe, t, dir);
        const double val = class_potential(probe, 0, snap, pfml);
        if (val < best_val) {
          best_val = val;
          best_t = t;
        }
      }
      pr.radial_argmin = best_t;
      pr.radial_within_delta = best_t <= report.delta * (1.0 + 2e-3);
    } else {
      pr.radial_argmin = 0.0;
      pr.radial_within_delta = true;
    }

    DescentOptions copt = opt;
    copt.max_iters = 50000;
    const DescentResult cres = find_local_minimum(snap, 0, cpml, z, copt);
    pr.cpml_dist_to_centroid = distance(cres.point, center);
    pr.cpml_converged = cres.converged;
    report.per_point.push_back(pr);
  }
  return report;
}

struct Corollary1Trial {
  double w2_pfml = 0.0;
  double w2_cpml = 0.0;
  bool pfml_within_delta = false;
  bool pfml_beats_cpml = false;
  bool pfml_settled_all = false;
  bool cpml_settled_all = false;
  // Two relaxed proxies within delta/2 of each other: the corollary's
  // one-to-one migration assumption did not hold in this trial.
  bool proxy_collision = false;
};

struct Corollary1Report {
  double delta = 0.0;
  double alpha = 0.0;
  int num_proxies = 0;
  std::vector<Corollary1Trial> trials;
  double fraction_pfml_within_delta = 0.0;
  double fraction_pfml_beats_cpml = 0.0;
  double fraction_both = 0.0;
  int num_collisions = 0;
};

// Proxies initialized from a normal distribution around the data centroid
// relax independently under the attraction-only field of the data (for the
// decaying and the contrastive kernel separately, from identical starts);
// the relaxed sets are compared to the data through w2_alignment.
inline Corollary1Report corollary1_check(const std::vector<Vec>& points, int num_proxies,
                                         double alpha,
                                         std::optional<double> delta_opt, int num_trials,
                                         std::uint64_t seed) {
  if (points.size() < 2) throw std::invalid_argument("corollary1_check: need >= 2 points");
  if (num_proxies < 1 || num_proxies > static_cast<int>(points.size()))
    throw std::invalid_argument("corollary1_check: need 1 <= m <= n proxies");
  Corollary1Report report;
  report.alpha = alpha;
  report.num_proxies = num_proxies;
  const double minsep = min_pairwise_distance(points);
  report.delta = delta_opt.value_or(0.9 * prop1_delta_bound(minsep, points.size()));

  const ChargeSnapshot snap = points_snapshot(points);
  const PotentialKernel pfml = make_pfml_kernel(report.delta, alpha);
  const PotentialKernel cpml = make_cpml_kernel(CpmlParams{report.delta});
  const Vec center = centroid(points);
  double spread = 0.0;
  for (const Vec& p : points) spread += squared_distance(p, center);
  spread = std::sqrt(spread / static_cast<double>(points.size()));

  const double within_tol = report.delta * (1.0 + 1e-6);
  for (int trial = 0; trial < num_trials; ++trial) {
    auto rng = substream(seed, "corollary1", static_cast<std::uint64_t>(trial));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vec> starts(static_cast<std::size_t>(num_proxies), center);
    for (Vec& p : starts)
      for (double& x : p) x += spread * gauss(rng);

    Corollary1Trial tr;
    tr.pfml_settled_all = true;
    tr.cpml_settled_all = true;
    std::vector<Vec> relaxed_pfml, relaxed_cpml;
    for (const Vec& start : starts) {
      DescentOptions opt;
      opt.tol = 1e-8;
      opt.max_iters = 50000;
      opt.max_step = 0.5 * report.delta;
      const DescentResult rp = find_local_minimum(snap, 0, pfml, start, opt);
      tr.pfml_settled_all = tr.pfml_settled_all && (rp.converged || rp.iters < opt.max_iters);
      relaxed_pfml.push_back(rp.point);
      const DescentResult rc = find_local_minimum(snap, 0, cpml, start, opt);
      tr.cpml_settled_all = tr.cpml_settled_all && (rc.converged || rc.iters < opt.max_iters);
      relaxed_cpml.push_back(rc.point);
    }
    tr.w2_pfml = w2_alignment(relaxed_pfml, points).w2;
    tr.w2_cpml = w2_alignment(relaxed_cpml, points).w2;
    tr.pfml_within_delta = tr.w2_pfml <= within_tol;
    tr.pfml_beats_cpml = tr.w2_pfml < tr.w2_cpml;
    tr.proxy_collision =
        relaxed_pfml.size() > 1 && min_pairwise_distance(relaxed_pfml) < 0.5 * report.delta;
    report.trials.push_back(tr);
  }
  int within = 0, beats = 0, both = 0;
  for (const auto& tr : report.trials) {
    within += tr.pfml_within_delta ? 1 : 0;
    beats += tr.pfml_beats_cpml ? 1 : 0;
    both += (tr.pfml_within_delta && tr.pfml_beats_cpml) ? 1 : 0;
    report.num_collisions += tr.proxy_collision ? 1 : 0;
  }
  const double n = static_cast<double>(std::max(1, num_trials));
  report.fraction_pfml_within_delta = within / n;
  report.fraction_pfml_beats_cpml = beats / n;
  report.fraction_both = both / n;
  return report;
}

// Default desk-scale instances for the check runner.

inline std::vector<Vec> random_prop1_points(std::uint64_t seed, std::uint64_t index) {
  auto rng = substream(seed, "prop1.points", index);
  std::uniform_int_distribution<int> n_dist(2, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int n = n_dist(rng);
    std::vector<Vec> pts(static_cast<std::size_t>(n), Vec(2));
    for (Vec& p : pts)
      for (double& x : p) x = unit(rng);
    if (min_pairwise_distance(pts) >= 0.08) return pts;
  }
  throw std::runtime_error("random_prop1_points: rejection sampling failed");
}

// n points in two 2-D clusters with a floor on the pairwise separation, so
// the delta bound stays comfortably above numerical noise.
inline std::vector<Vec> two_cluster_points(int n, std::uint64_t seed, std::uint64_t index) {
  auto rng = substream(seed, "corollary1.points", index);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Vec> pts;
    for (int i = 0; i < n; ++i) {
      const double cx = (i % 2 == 0) ? -1.25 : 1.25;
      pts.push_back({cx + 0.4 * gauss(rng), 0.4 * gauss(rng)});
    }
    if (min_pairwise_distance(pts) >= 0.25) return pts;
  }
  throw std::runtime_error("two_cluster_points: rejection sampling failed");
}

}  // namespace pf
