#include <catch2/catch_amalgamated.hpp>

#include "pf/cpml.hpp"
#include "pf/kernel.hpp"

using Catch::Approx;

namespace {

pf::Vec at(double x, double y = 0.0) { return {x, y}; }

}  // namespace

TEST_CASE("attraction potential branches") {
  const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 1.0);
  // clamp-region constant -1/delta
  CHECK(pf::psi_att(at(0.1), at(0.0), k) == Approx(-5.0));
  // direct evaluation outside the clamp
  CHECK(pf::psi_att(at(0.5), at(0.0), k) == Approx(-2.0));
  const pf::PotentialKernel k2 = pf::make_pfml_kernel(0.2, 2.0);
  CHECK(pf::psi_att(at(0.5), at(0.0), k2) == Approx(-4.0));
}

TEST_CASE("repulsion potential branches") {
  const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 1.0);
  // outside-cutoff constant 1/delta
  CHECK(pf::psi_rep(at(0.5), at(0.0), k) == Approx(5.0));
  CHECK(pf::psi_rep(at(0.1), at(0.0), k) == Approx(10.0));
  // constant-force variant: linear ramp delta - d inside the cutoff
  const pf::PotentialKernel k0 = pf::make_pfml_kernel(0.2, 0.0);
  CHECK(pf::psi_rep(at(0.1), at(0.0), k0) == Approx(0.1));
  CHECK(pf::psi_rep(at(0.5), at(0.0), k0) == Approx(0.0));
}

TEST_CASE("pair forces") {
  const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 1.0);
  SECTION("zero force inside the attraction clamp") {
    const pf::Vec f = pf::force_pair(at(0.1), at(0.0), k, pf::Interaction::Att);
    CHECK(f[0] == 0.0);
    CHECK(f[1] == 0.0);
  }
  SECTION("attraction points back toward the source") {
    const pf::Vec f = pf::force_pair(at(0.5), at(0.0), k, pf::Interaction::Att);
    CHECK(f[0] == Approx(-4.0));
    CHECK(f[1] == Approx(0.0));
  }
  SECTION("repulsion points away inside the cutoff") {
    const pf::Vec f = pf::force_pair(at(0.1), at(0.0), k, pf::Interaction::Rep);
    CHECK(f[0] == Approx(100.0));
    CHECK(f[1] == Approx(0.0));
  }
  SECTION("repulsion vanishes at and beyond the cutoff") {
    CHECK(pf::norm(pf::force_pair(at(0.2), at(0.0), k, pf::Interaction::Rep)) == 0.0);
    CHECK(pf::norm(pf::force_pair(at(0.7), at(0.0), k, pf::Interaction::Rep)) == 0.0);
  }
}

TEST_CASE("continuity at the clamp radii") {
  const double eps = 1e-9;
  const double alphas[] = {0.0, 1.0, 2.0, 4.0};
  for (double alpha : alphas) {
    const pf::FieldParams p{0.2, 0.25, alpha};
    const auto inside_att = pf::pfml_att_radial(0.2 - eps, p);
    const auto outside_att = pf::pfml_att_radial(0.2 + eps, p);
    CHECK(std::fabs(inside_att.value - outside_att.value) <=
          1e-6 * std::max(1.0, std::fabs(outside_att.value)));
    const auto inside_rep = pf::pfml_rep_radial(0.25 - eps, p);
    const auto outside_rep = pf::pfml_rep_radial(0.25 + eps, p);
    CHECK(std::fabs(inside_rep.value - outside_rep.value) <=
          1e-6 * std::max(1.0, std::fabs(outside_rep.value)));
  }
  const auto cin = pf::cpml_att_radial(0.2 - eps, 0.2);
  const auto cout = pf::cpml_att_radial(0.2 + eps, 0.2);
  CHECK(std::fabs(cin.value - cout.value) <= 1e-6);
  const auto rin = pf::cpml_rep_radial(0.2 - eps, 0.2);
  const auto rout = pf::cpml_rep_radial(0.2 + eps, 0.2);
  CHECK(std::fabs(rin.value - rout.value) <= 1e-6);
}

TEST_CASE("force decays with distance beyond the clamp") {
  for (double alpha : {1.0, 2.0, 4.0}) {
    const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, alpha);
    double prev = pf::norm(pf::force_pair(at(0.25), at(0.0), k, pf::Interaction::Att));
    for (double d : {0.4, 0.8, 1.6, 3.2}) {
      const double cur = pf::norm(pf::force_pair(at(d), at(0.0), k, pf::Interaction::Att));
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("contrastive kernel grows with distance") {
  const pf::CpmlParams p{0.2};
  CHECK(pf::psi_att_star(at(0.1), at(0.0), p) == Approx(0.04));
  CHECK(pf::psi_att_star(at(0.5), at(0.0), p) == Approx(0.25));
  const pf::Vec f = pf::force_pair_star(at(0.5), at(0.0), p, pf::Interaction::Att);
  CHECK(f[0] == Approx(-1.0));
  CHECK(f[1] == Approx(0.0));
  // anti-decay: attraction force magnitude increases with distance
  double prev = 0.0;
  for (double d : {0.3, 0.6, 1.2, 2.4}) {
    const double cur = pf::norm(pf::force_pair_star(at(d), at(0.0), p, pf::Interaction::Att));
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("contrastive repulsion hinge") {
  const pf::CpmlParams p{0.2};
  CHECK(pf::psi_rep_star(at(0.25), at(0.0), p) == 0.0);
  CHECK(pf::psi_rep_star(at(0.1), at(0.0), p) == Approx(0.01));
  const pf::Vec f = pf::force_pair_star(at(0.1), at(0.0), p, pf::Interaction::Rep);
  CHECK(f[0] == Approx(0.2));
  CHECK(f[1] == Approx(0.0));
}

TEST_CASE("near-coincident points hit the distance guard") {
  const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 2.0);
  pf::EvalDiagnostics diag;
  const double psi = pf::psi_rep(at(0.0), at(0.0), k, &diag);
  CHECK(psi == Approx(std::pow(pf::kDistanceGuard, -2.0)));
  CHECK(diag.guard_hits.load() == 1);
  // attraction at zero distance is the clamp constant with zero force
  const double att = pf::psi_att(at(0.0), at(0.0), k, &diag);
  CHECK(att == Approx(-1.0 / 0.04));
  CHECK(pf::norm(pf::force_pair(at(0.0), at(0.0), k, pf::Interaction::Att, &diag)) == 0.0);
  CHECK(diag.guard_hits.load() >= 2);
}

TEST_CASE("dimension mismatch is a contract violation") {
  const pf::PotentialKernel k = pf::make_pfml_kernel(0.2, 1.0);
  CHECK_THROWS_AS(pf::psi_att({0.0, 0.0}, {1.0, 0.0, 0.0}, k), std::invalid_argument);
  CHECK_THROWS_AS(pf::psi_att(at(0.5), at(0.0), pf::make_cpml_kernel(pf::CpmlParams{0.2})),
                  std::invalid_argument);
}
