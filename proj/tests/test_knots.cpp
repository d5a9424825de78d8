#include <cmath>

#include "reeb321/knots.hpp"
#include "reeb321/orbits.hpp"
#include "support.hpp"

using namespace reeb;

namespace {

ClosedCurve circle(int n, const Vec4& a, const Vec4& b, const Vec4& c = Vec4::Zero()) {
  std::vector<State4> s;
  for (int j = 0; j < n; ++j) {
    const double t = kTwoPi * j / n;
    s.push_back(c + std::cos(t) * a + std::sin(t) * b);
  }
  return curve_from_loop(s);
}

ClosedCurve hopf_a(int n = 512) { return circle(n, Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0)); }
ClosedCurve hopf_b(int n = 512) { return circle(n, Vec4(0, 0, 1, 0), Vec4(0, 0, 0, 1)); }

std::vector<Vec3> ring(int n, const Vec3& c, const Vec3& u, const Vec3& v, double r) {
  std::vector<Vec3> out;
  for (int j = 0; j < n; ++j) {
    const double t = kTwoPi * j / n;
    out.push_back(c + r * (std::cos(t) * u + std::sin(t) * v));
  }
  return out;
}

}  // namespace

TEST_CASE("Hopf circles link once, positively") {
  const LinkingResult r = linking_number(hopf_a(), hopf_b());
  CHECK(r.lk == 1);
  CHECK(r.guard < 1e-6);
}

TEST_CASE("Gauss integral on explicit R3 configurations") {
  // two rings through each other
  const auto a = ring(512, Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), 1.0);
  const auto b = ring(512, Vec3(1, 0, 0), Vec3(1, 0, 0), Vec3(0, 0, 1), 1.0);
  const LinkingResult r = gauss_linking(a, b);
  CHECK(std::abs(r.lk) == 1);
  CHECK(r.guard < 1e-6);
  // far apart
  const auto c = ring(512, Vec3(5, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), 1.0);
  CHECK(gauss_linking(a, c).lk == 0);
  // symmetry and orientation
  const LinkingResult ba = gauss_linking(b, a);
  CHECK(std::abs(ba.raw - r.raw) < 1e-9);
  std::vector<Vec3> brev(b.rbegin(), b.rend());
  CHECK(gauss_linking(a, brev).lk == -r.lk);
}

TEST_CASE("orientation reversal in S3 negates the linking number") {
  const LinkingResult r = linking_number(hopf_a(), hopf_b().reversed());
  CHECK(r.lk == -1);
}

TEST_CASE("special orbits are pairwise unlinked") {
  const SpecialOrbits so = special_orbits(preset("validated"));
  const ReebOrbit* o[3] = {&so.P1, &so.P2, &so.P3};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const LinkingResult r = linking_number(orbit_curve(*o[i]), orbit_curve(*o[j]));
      CHECK(r.lk == 0);
      CHECK(r.guard < 0.05);
    }
  const Projection pr = stereographic_project({orbit_curve(so.P1), orbit_curve(so.P3)});
  CHECK(pr.pole_distance > 0.1);
}

TEST_CASE("pole independence and quadrature convergence") {
  const SpecialOrbits so = special_orbits(preset("validated"));
  const ClosedCurve a = orbit_curve(so.P1), b = orbit_curve(so.P3);
  CHECK(linking_number(a, b, {}, 1).lk == linking_number(a, b, {}, 2).lk);
  CHECK(linking_number(hopf_a(), hopf_b(), {}, 7).lk == linking_number(hopf_a(), hopf_b(), {}, 8).lk);
  const double r512 = linking_number(hopf_a(512), hopf_b(512)).raw;
  const double r1024 = linking_number(hopf_a(1024), hopf_b(1024)).raw;
  CHECK(std::abs(r512 - r1024) <= 1e-3);

  Tolerances t512;
  t512.curve_samples = 512;
  for (const ReebOrbit* o : {&so.P1, &so.P2, &so.P3}) {
    const double s1 = self_linking(preset("validated"), *o, t512).link.raw;
    const double s2 = self_linking(preset("validated"), *o).link.raw;
    CHECK(std::abs(s1 - s2) <= 1e-3);
  }
}

TEST_CASE("self-linking of the binding orbits is -1 in both global sections") {
  const HamiltonianParams p = preset("validated");
  const SpecialOrbits so = special_orbits(p);
  for (const ReebOrbit* o : {&so.P1, &so.P2, &so.P3}) {
    const SelfLinkResult a = self_linking(p, *o);
    CHECK(a.link.lk == -1);
    CHECK(a.link.guard < 0.05);
    CHECK(a.min_separation > Tolerances{}.sep);
    CHECK(self_linking(p, *o, {}, PushoffFrame::xbar2).link.lk == -1);
  }
}

TEST_CASE("offset halving keeps the self-linking value") {
  const HamiltonianParams p = preset("validated");
  const SpecialOrbits so = special_orbits(p);
  Tolerances t;
  for (double off : {0.05, 0.025, 0.0125}) {
    t.pushoff_offset = off;
    const SelfLinkResult r = self_linking(p, so.P3, t);
    CHECK(r.link.lk == -1);
    CHECK(r.link.guard < 1e-3);
  }
}

TEST_CASE("push-off along a Seifert-aligned constant frame of a planar unknot") {
  // P2 lies in a coordinate 2-plane; pushing along a constant normal gives lk = 0
  const HamiltonianParams p = preset("validated");
  const SpecialOrbits so = special_orbits(p);
  const ClosedCurve c = orbit_curve(so.P2);
  const NodeSection ex2 = [](const State4&) { return Vec4(0, 0, 1, 0); };
  const ClosedCurve push = pushoff(p, c, ex2, 0.05);
  CHECK(linking_number(c, push).lk == 0);
}

TEST_CASE("push-off errors") {
  const HamiltonianParams p = preset("validated");
  const SpecialOrbits so = special_orbits(p);
  const ClosedCurve c = orbit_curve(so.P2);
  const NodeSection zero = [](const State4&) { return Vec4::Zero(); };
  CHECK_THROWS_CODE(pushoff(p, c, zero, 0.05), ErrorCode::PreconditionViolation);
  const NodeSection along = [](const State4& z) { return Vec4(-z[1], z[0], 0, 0); };
  Tolerances t;
  t.sep = 0.5;
  CHECK_THROWS_CODE(pushoff(p, c, along, 1e-4, t), ErrorCode::OffsetTooLarge);
}

TEST_CASE("no safe pole when curves fill the sphere") {
  // many great circles through a dense set of directions
  std::vector<ClosedCurve> cs;
  for (int k = 0; k < 24; ++k) {
    const double a = kPi * k / 24;
    cs.push_back(circle(256, Vec4(std::cos(a), 0, std::sin(a), 0), Vec4(0, std::cos(a), 0, std::sin(a))));
    cs.push_back(circle(256, Vec4(std::cos(a), 0, 0, std::sin(a)), Vec4(0, std::cos(a), -std::sin(a), 0)));
  }
  Tolerances t;
  t.pole = 0.9;
  t.sep = 0.0;
  CHECK_THROWS_CODE(stereographic_project(cs, t), ErrorCode::NoSafePole);
}

TEST_CASE("a product loop above the p1 level links P3") {
  const HamiltonianParams p = preset("validated");
  const SpecialOrbits so = special_orbits(p);
  const double C = 2.0 * so.c1.h2_value;
  Vec2 seed(-1, -1);
  for (const Vec2& s : level_seeds(p, C))
    if (s[1] == 0.0 && s[0] > so.c3.location[0]) seed = s;
  REQUIRE(seed[0] > 0.0);
  const PlanarLoop loop = planar_period_and_area(p, C, seed);
  const ClosedCurve c = curve_from_loop(product_loop(C, loop, 3, 1));
  const LinkingResult r = linking_number(c, orbit_curve(so.P3));
  CHECK(r.lk != 0);
}

TEST_CASE("rounding guard") {
  // coarse sampling leaves a quadrature error far above a tight guard
  const auto a = ring(8, Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), 1.0);
  const auto b = ring(8, Vec3(1.0, 0, 0), Vec3(1, 0, 0), Vec3(0, 0, 1), 1.0);
  Tolerances t;
  t.rounding_guard = 1e-12;
  CHECK_THROWS_CODE(gauss_linking(a, b, t), ErrorCode::RoundingUnsafe);
}
