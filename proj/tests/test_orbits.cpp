#include <cmath>

#include "reeb321/orbits.hpp"
#include "support.hpp"

using namespace reeb;

namespace {

double closed_T1(double e) { return kPi * (1.0 - 7.0 * std::pow(e, 4) / 48.0); }
double closed_T3(double e) { return kPi * (1.0 + 8.0 * std::pow(e, 4) / 3.0); }

double shoelace(const std::vector<Vec2>& s) {
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) a += s[i][0] * s[i + 1][1] - s[i + 1][0] * s[i][1];
  return 0.5 * a;
}

}  // namespace

TEST_CASE("critical points of the validated preset") {
  const HamiltonianParams p = preset("validated");
  const CriticalPointReport r = find_critical_points(p);
  REQUIRE(r.structure_ok);
  REQUIRE(r.points.size() == 3);
  CHECK(r.points[0].location[0] == doctest::Approx(0.0));
  CHECK(r.points[1].location[0] == doctest::Approx(0.25));
  CHECK(r.points[2].location[0] == doctest::Approx(1.0));
  CHECK(r.points[0].signature == HessianSignature::saddle);
  CHECK(r.points[0].flow_type == FlowType::hyperbolic);
  CHECK(r.points[1].flow_type == FlowType::elliptic);
  CHECK(r.points[2].flow_type == FlowType::elliptic);
  for (const CriticalPoint& c : r.points) CHECK(h2_gradient(p, c.location[0], c.location[1]).norm() < 1e-12);
  // origin: H2 Hessian diag(2 eps^2 c, 2 eps^2 d), h = 2 -> k1 = -2*2 eps^2 d, k2 = 2*2 eps^2 c
  CHECK(r.points[0].k1 == doctest::Approx(0.125));
  CHECK(r.points[0].k2 == doctest::Approx(1.0));
}

TEST_CASE("periods match the closed forms and satisfy the chain") {
  for (double e : {0.3, 0.5}) {
    const HamiltonianParams p = preset("validated", e);
    const SpecialOrbits so = special_orbits(p);
    CHECK(std::abs(so.P1.reeb_period - closed_T1(e)) < 1e-9);
    CHECK(std::abs(so.P2.reeb_period - kPi) < 1e-12);
    CHECK(std::abs(so.P3.reeb_period - closed_T3(e)) < 1e-9);
    CHECK(so.chain_ok);
    CHECK(so.pattern_ok);
    CHECK(so.P3.reeb_period < 2.0 * so.P1.reeb_period);
  }
}

TEST_CASE("action of each special orbit equals its period") {
  const SpecialOrbits so = special_orbits(preset("validated"));
  for (const ReebOrbit* o : {&so.P1, &so.P2, &so.P3})
    CHECK(std::abs(orbit_action(special_orbit_loop(*o, 1024)) - o->reeb_period) < 1e-10);
}

TEST_CASE("chain failure surfaces as HypothesisFailure") {
  // T3 grows like eps^4 and overtakes 2 T1
  const HamiltonianParams p = preset("validated", 1.2);
  const SpecialOrbits so = special_orbits_unchecked(p);
  CHECK_FALSE(so.chain_ok);
  CHECK_THROWS_CODE(special_orbits(p), ErrorCode::HypothesisFailure);
}

TEST_CASE("paper-figure parameters: elliptic origin and extra critical points") {
  const HamiltonianParams p = preset("paper-figure");
  const CriticalPointReport r = find_critical_points(p);
  CHECK_FALSE(r.structure_ok);
  CHECK(r.points.size() == 5);
  const SpecialOrbits so = special_orbits_unchecked(p);
  CHECK(so.c2.flow_type == FlowType::elliptic);
  CHECK(so.c2.k1 * so.c2.k2 < 0.0);
  CHECK_FALSE(so.pattern_ok);
}

TEST_CASE("planar loop near the p3 well has the linearized period") {
  const HamiltonianParams p = preset("validated");
  const SpecialOrbits so = special_orbits(p);
  const Mat2 H = h2_hessian(p, so.c3.location[0], 0.0);
  const double C = so.c3.h2_value + 1e-6;
  const std::vector<Vec2> seeds = level_seeds(p, C);
  REQUIRE_FALSE(seeds.empty());
  Vec2 seed = seeds.front();
  for (const Vec2& s : seeds)
    if ((s - so.c3.location).norm() < (seed - so.c3.location).norm()) seed = s;
  const PlanarLoop L = planar_period_and_area(p, C, seed);
  CHECK(L.tau == doctest::Approx(kTwoPi / std::sqrt(H.determinant())).epsilon(1e-3));
  CHECK(std::abs(L.area - shoelace(L.samples)) < 1e-6 * std::max(1.0, std::abs(L.area)) + 1e-9);
  for (const Vec2& s : L.samples) CHECK(std::abs(h2(p, s[0], s[1]) - C) < 1e-8);
}

TEST_CASE("level seeds lie on the level") {
  const HamiltonianParams p = preset("validated");
  for (double C : {-0.05, 0.0, 0.003, 0.2}) {
    for (const Vec2& s : level_seeds(p, C)) CHECK(std::abs(h2(p, s[0], s[1]) - C) < 1e-10);
  }
}

TEST_CASE("scan with bound T3 is empty and every loop passes Claim I") {
  const HamiltonianParams p = preset("validated");
  const SpecialOrbits so = special_orbits(p);
  const ScanResult r = resonant_orbit_scan(p, so.P3.reeb_period, default_level_grid(p, 64));
  CHECK(r.candidates.empty());
  REQUIRE(r.loops.size() >= 64);
  for (const ScanLoop& l : r.loops) {
    CHECK(l.claim.pass);
    CHECK(l.claim.product >= kTwoPi);
    CHECK(l.tau > kTwoPi);
    CHECK(l.level_error < 1e-8);
    CHECK(l.best_action > so.P3.reeb_period);
  }
}

TEST_CASE("scan with a larger bound finds product loops whose action is the orbit integral") {
  const HamiltonianParams p = preset("validated");
  const ScanResult r = resonant_orbit_scan(p, 10.0, default_level_grid(p, 16));
  REQUIRE_FALSE(r.candidates.empty());
  for (const ScanCandidate& c : r.candidates) {
    CHECK(c.action <= 10.0);
    const ScanLoop& l = r.loops[c.loop_index];
    const std::vector<State4> loop = product_loop(c.C, l.loop, c.m1, c.m2);
    for (const State4& z : loop) CHECK(std::abs(energy(p, z) - 0.5) < 1e-8);
    CHECK(std::abs(orbit_action(loop) - c.action) < 1e-8);
  }
}

TEST_CASE("Claim I on a round Hamiltonian loop") {
  // H1 block only: a circle of radius 1 in z1, Hamiltonian period 2 pi.
  const HamiltonianParams p = preset("validated");
  std::vector<State4> loop;
  const double x2 = 0.0;
  for (int j = 0; j <= 256; ++j) {
    const double t = kTwoPi * (j % 256) / 256;
    loop.emplace_back(std::cos(t), std::sin(t), x2, 0.0);
  }
  const ClaimResult r = claim1_check(p, loop, kTwoPi);
  CHECK(r.h_sup >= 1.0);
  CHECK(r.product >= kTwoPi - 1e-9);
}

TEST_CASE("separatrix loops and homoclinic orbits through P2") {
  const HamiltonianParams p = preset("validated");
  const double e = p.epsilon;
  const SeparatrixResult r = separatrix_and_homoclinics(p, 1e-6, 50.0);
  CHECK(std::abs(r.gamma1.axis_crossing - (5.0 - std::sqrt(7.0)) * e / 3.0) < 1e-8);
  CHECK(std::abs(r.gamma2.axis_crossing - (5.0 + std::sqrt(7.0)) * e / 3.0) < 1e-8);
  CHECK(r.end_distance_forward <= 1e-4);
  CHECK(r.end_distance_backward <= 1e-4);
  CHECK(r.gamma1.level_error < 1e-8);
  CHECK(r.gamma2.level_error < 1e-8);
  REQUIRE(r.homoclinic.size() == 2);
  for (const Trajectory& t : r.homoclinic) CHECK(t.energy_drift < 1e-8);

  const SeparatrixResult s = separatrix_and_homoclinics(p, 1e-6, 50.0, {}, true);
  CHECK(std::abs(s.gamma1.axis_crossing - r.gamma1.axis_crossing) < 1e-8);
  CHECK(std::abs(s.gamma2.axis_crossing - r.gamma2.axis_crossing) < 1e-8);
}

TEST_CASE("distance to P2 of points on P2 is zero") {
  const SpecialOrbits so = special_orbits(preset("validated"));
  for (const State4& z : special_orbit_loop(so.P2, 32)) CHECK(distance_to_p2(z) < 1e-12);
}

TEST_CASE("default level grid stays inside (H2(p3), H2(p1)]") {
  for (double e : {0.5, 0.37, 0.21}) {
    const HamiltonianParams p = preset("validated", e);
    const SpecialOrbits so = special_orbits_unchecked(p);
    for (int n : {1, 7, 64, 100}) {
      const std::vector<double> g = default_level_grid(p, n);
      REQUIRE(g.size() == static_cast<std::size_t>(n));
      CHECK(g.back() == so.c1.h2_value);
      for (double C : g) {
        CHECK(C > so.c3.h2_value);
        CHECK(C <= so.c1.h2_value);
      }
    }
  }
}
