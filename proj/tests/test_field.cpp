#include <catch2/catch_amalgamated.hpp>

#include "pf/checks.hpp"
#include "pf/field.hpp"
#include "test_helpers.hpp"

using Catch::Approx;

namespace {

pf::ChargeSnapshot snapshot_of(const std::vector<pf::Vec>& pts, const std::vector<int>& labels,
                               int num_classes) {
  return pf::make_snapshot(pts, labels, num_classes, {}, 0);
}

}  // namespace

TEST_CASE("class potential sums attraction over same-class sources") {
  const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 1.0);
  const auto snap = snapshot_of({{0.5, 0.0}, {0.0, 0.6}}, {0, 0}, 1);
  const pf::Vec r{0.0, 0.0};
  CHECK(pf::class_potential(r, 0, snap, k) == Approx(-2.0 - 1.0 / 0.6));
}

TEST_CASE("class potential repels other classes") {
  const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 1.0);
  const auto snap = snapshot_of({{0.5, 0.0}}, {1}, 2);
  CHECK(pf::class_potential({0.0, 0.0}, 0, snap, k) == Approx(5.0));
}

TEST_CASE("empty source set after exclusion gives zero") {
  const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 1.0);
  const auto snap = snapshot_of({{0.5, 0.0}}, {0}, 1);
  CHECK(pf::class_potential({0.5, 0.0}, 0, snap, k, 0) == 0.0);
}

TEST_CASE("class force examples") {
  const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 1.0);
  SECTION("symmetric same-class sources cancel") {
    const auto snap = snapshot_of({{0.5, 0.0}, {-0.5, 0.0}}, {0, 0}, 1);
    const pf::Vec f = pf::class_force({0.0, 0.0}, 0, snap, k);
    CHECK(f[0] == Approx(0.0).margin(1e-15));
    CHECK(f[1] == Approx(0.0).margin(1e-15));
  }
  SECTION("single same-class source") {
    const auto snap = snapshot_of({{0.0, 0.0}}, {0}, 1);
    const pf::Vec f = pf::class_force({0.5, 0.0}, 0, snap, k);
    CHECK(f[0] == Approx(-4.0));
  }
  SECTION("other-class source beyond the cutoff exerts nothing") {
    const auto snap = snapshot_of({{0.0, 0.0}}, {1}, 2);
    CHECK(pf::norm(pf::class_force({0.5, 0.0}, 0, snap, k)) == 0.0);
  }
}

TEST_CASE("total energy") {
  const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 1.0);
  SECTION("two same-class samples at distance 0.5") {
    const auto snap = snapshot_of({{0.0, 0.0}, {0.5, 0.0}}, {0, 0}, 1);
    CHECK(pf::total_energy(snap, k) == Approx(-4.0));
  }
  SECTION("a lone sample has no pair interactions") {
    const auto snap = snapshot_of({{0.3, 0.1}}, {0}, 1);
    CHECK(pf::total_energy(snap, k) == 0.0);
  }
  SECTION("two distant samples of different classes sit on the repulsion plateau") {
    const auto snap = snapshot_of({{0.0, 0.0}, {0.9, 0.0}}, {0, 1}, 2);
    CHECK(pf::total_energy(snap, k) == Approx(2.0 / 0.2));
  }
}

TEST_CASE("batch forces on a same-class pair") {
  const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 1.0);
  const auto snap = snapshot_of({{0.0, 0.0}, {0.5, 0.0}}, {0, 0}, 1);
  const auto fs = pf::batch_forces(snap, k, pf::ForceMode::ForceSemantics);
  CHECK(fs[0][0] == Approx(4.0));
  CHECK(fs[1][0] == Approx(-4.0));
  const auto fg = pf::batch_forces(snap, k, pf::ForceMode::FullGradient);
  CHECK(fg[0][0] == Approx(8.0));
  CHECK(fg[1][0] == Approx(-8.0));
}

TEST_CASE("clamp plateaus give an all-zero force field") {
  const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 2.0);
  // same-class pair inside delta_att, other-class pair beyond delta_rep
  const auto snap = snapshot_of({{0.0, 0.0}, {0.1, 0.0}, {5.0, 0.0}, {5.1, 0.0}}, {0, 0, 1, 1}, 2);
  for (const auto& f : pf::batch_forces(snap, k, pf::ForceMode::ForceSemantics))
    CHECK(pf::norm(f) == 0.0);
  for (const auto& f : pf::batch_forces(snap, k, pf::ForceMode::FullGradient))
    CHECK(pf::norm(f) == 0.0);
}

TEST_CASE("superposition over disjoint source sets") {
  auto rng = pf::substream(7, "superposition");
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 2.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<pf::Vec> a_pts, b_pts, all_pts;
    std::vector<int> a_labels, b_labels, all_labels;
    for (int i = 0; i < 6; ++i) {
      pf::Vec p{unit(rng), unit(rng), unit(rng)};
      const int label = i % 2;
      all_pts.push_back(p);
      all_labels.push_back(label);
      if (i < 3) {
        a_pts.push_back(p);
        a_labels.push_back(label);
      } else {
        b_pts.push_back(p);
        b_labels.push_back(label);
      }
    }
    const pf::Vec r{unit(rng), unit(rng), unit(rng)};
    const double whole = pf::class_potential(r, 0, snapshot_of(all_pts, all_labels, 2), k);
    const double parts = pf::class_potential(r, 0, snapshot_of(a_pts, a_labels, 2), k) +
                         pf::class_potential(r, 0, snapshot_of(b_pts, b_labels, 2), k);
    CHECK(std::fabs(whole - parts) <= 1e-12 * std::max(1.0, std::fabs(whole)));
  }
}

TEST_CASE("rigid motions leave the energy invariant and rotate forces") {
  auto rng = pf::substream(11, "rigid");
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int dim : {2, 8}) {
    const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 2.0);
    std::vector<pf::Vec> pts(7, pf::Vec(static_cast<std::size_t>(dim)));
    std::vector<int> labels;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (double& x : pts[i]) x = unit(rng);
      labels.push_back(static_cast<int>(i) % 2);
    }
    const auto rot = pftest::random_rotation(dim, rng);
    pf::Vec shift(static_cast<std::size_t>(dim));
    for (double& x : shift) x = unit(rng);
    std::vector<pf::Vec> moved;
    for (const auto& p : pts) moved.push_back(pf::add(pftest::apply_matrix(rot, p), shift));

    const auto snap = snapshot_of(pts, labels, 2);
    const auto snap_moved = snapshot_of(moved, labels, 2);
    const double u0 = pf::total_energy(snap, k);
    const double u1 = pf::total_energy(snap_moved, k);
    CHECK(std::fabs(u1 - u0) <= 1e-9 * std::max(1.0, std::fabs(u0)));

    const auto f0 = pf::batch_forces(snap, k, pf::ForceMode::ForceSemantics);
    const auto f1 = pf::batch_forces(snap_moved, k, pf::ForceMode::ForceSemantics);
    for (std::size_t i = 0; i < f0.size(); ++i) {
      const pf::Vec rotated = pftest::apply_matrix(rot, f0[i]);
      CHECK(pf::distance(rotated, f1[i]) <= 1e-9 * std::max(1.0, pf::norm(f0[i])));
    }
  }
}

TEST_CASE("analytic forces match finite differences away from the clamps") {
  const auto report = pf::gradient_check(4, 12345);
  INFO("pfml " << report.max_rel_error_pfml << " cpml " << report.max_rel_error_cpml);
  CHECK(report.max_rel_error() < 1e-6);
  CHECK(report.cases == 36);
}

TEST_CASE("full gradient is exactly twice the fixed-source force") {
  const auto report = pf::double_count_check(20, 99);
  CHECK(report.max_rel_deviation < 1e-9);
}

TEST_CASE("moving along the force lowers the energy") {
  const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 2.0);
  SECTION("isolated same-class pair beyond the clamp") {
    std::vector<pf::Vec> pts{{0.0, 0.0}, {0.7, 0.0}};
    const auto snap = snapshot_of(pts, {0, 0}, 1);
    const auto forces = pf::batch_forces(snap, k, pf::ForceMode::ForceSemantics);
    const double before = pf::total_energy(snap, k);
    std::vector<pf::Vec> moved = pts;
    for (std::size_t i = 0; i < pts.size(); ++i) pf::add_scaled(moved[i], 1e-4, forces[i]);
    CHECK(pf::total_energy(snapshot_of(moved, {0, 0}, 1), k) < before);
  }
  SECTION("isolated other-class pair inside the cutoff") {
    std::vector<pf::Vec> pts{{0.0, 0.0}, {0.1, 0.0}};
    const auto snap = snapshot_of(pts, {0, 1}, 2);
    const auto forces = pf::batch_forces(snap, k, pf::ForceMode::ForceSemantics);
    const double before = pf::total_energy(snap, k);
    std::vector<pf::Vec> moved = pts;
    for (std::size_t i = 0; i < pts.size(); ++i) pf::add_scaled(moved[i], 1e-6, forces[i]);
    CHECK(pf::total_energy(snapshot_of(moved, {0, 1}, 2), k) < before);
  }
}

TEST_CASE("field grid") {
  const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 1.0);
  const pf::GridBounds bounds{-1.0, 1.0, -1.0, 1.0};
  SECTION("empty snapshot gives an all-zero grid") {
    pf::ChargeSnapshot empty;
    const auto grid = pf::field_grid(empty, k, 0, bounds, 5);
    for (double v : grid.psi) CHECK(v == 0.0);
  }
  SECTION("lone source at the center") {
    const auto snap = snapshot_of({{0.0, 0.0}}, {0}, 1);
    const auto grid = pf::field_grid(snap, k, 0, bounds, 5);
    // center cell sits inside the clamp
    CHECK(grid.psi[2 * 5 + 2] == Approx(-5.0));
    // radial symmetry: equidistant cells agree
    CHECK(grid.psi[2 * 5 + 0] == Approx(grid.psi[2 * 5 + 4]));
    CHECK(grid.psi[0 * 5 + 2] == Approx(grid.psi[4 * 5 + 2]));
  }
  SECTION("non-planar snapshots are rejected") {
    const auto snap = snapshot_of({{0.0, 0.0, 0.0}}, {0}, 1);
    CHECK_THROWS_AS(pf::field_grid(snap, k, 0, bounds, 5), std::invalid_argument);
  }
}

TEST_CASE("parallel force evaluation reproduces the sequential result bitwise") {
  auto rng = pf::substream(3, "parallel");
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<pf::Vec> pts(24, pf::Vec(4));
  std::vector<int> labels;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (double& x : pts[i]) x = unit(rng);
    labels.push_back(static_cast<int>(i) % 3);
  }
  const auto snap = snapshot_of(pts, labels, 3);
  const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 4.0);
  const auto seq = pf::batch_forces(snap, k, pf::ForceMode::ForceSemantics);
  pf::max_threads() = 4;
  const auto par = pf::batch_forces(snap, k, pf::ForceMode::ForceSemantics);
  pf::max_threads() = 1;
  REQUIRE(seq.size() == par.size());
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t d = 0; d < seq[i].size(); ++d) CHECK(seq[i][d] == par[i][d]);
}
