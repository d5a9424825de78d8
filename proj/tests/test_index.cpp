#include <cmath>

#include "reeb321/index.hpp"
#include "reeb321/orbits.hpp"
#include "support.hpp"

using namespace reeb;

namespace {

Mat2 rot(double a) {
  Mat2 R;
  R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return R;
}

template <class F>
SymplecticPath make_path(int n, F phi) {
  SymplecticPath path;
  for (int j = 0; j <= n; ++j) {
    const double t = static_cast<double>(j) / n;
    path.grid.push_back(t);
    path.matrices.push_back(phi(t));
  }
  return path;
}

// Taylor series oracle for exp(A).
Mat2 expm_series(const Mat2& A) {
  Mat2 term = Mat2::Identity(), sum = Mat2::Identity();
  for (int k = 1; k < 60; ++k) {
    term = term * A / k;
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("rigid rotations: interval is a point, index 2 floor + 1") {
  for (double theta : {0.3, 1.3, -0.3, 2.7}) {
    const SymplecticPath p = make_path(256, [&](double t) { return rot(kTwoPi * theta * t); });
    const WindingInterval w = winding_interval(p);
    CHECK(w.lo == doctest::Approx(theta).epsilon(1e-9));
    CHECK(w.hi == doctest::Approx(theta).epsilon(1e-9));
    CHECK(cz_index(p, 0).mu_global == 2 * static_cast<int>(std::floor(theta)) + 1);
    CHECK(cz_index(p, 2).mu_global == 2 * static_cast<int>(std::floor(theta)) + 5);
  }
}

TEST_CASE("hyperbolic paths give even indices") {
  const SymplecticPath h = make_path(256, [](double t) {
    Mat2 D = Mat2::Zero();
    D(0, 0) = std::exp(2.0 * t);
    D(1, 1) = std::exp(-2.0 * t);
    return D;
  });
  CHECK(cz_index(h, 0).mu_global == 0);
  // positive hyperbolic after one full twist
  const SymplecticPath h1 = make_path(256, [](double t) {
    Mat2 D = Mat2::Zero();
    D(0, 0) = std::exp(2.0 * t);
    D(1, 1) = std::exp(-2.0 * t);
    return Mat2(rot(kTwoPi * t) * D);
  });
  CHECK(cz_index(h1, 0).mu_global == 2);
}

TEST_CASE("degenerate paths are rejected") {
  const SymplecticPath p = make_path(256, [](double t) { return rot(kTwoPi * t); });
  CHECK_THROWS_CODE(winding_interval(p), ErrorCode::DegenerateOrbit);
  CHECK(winding_interval_unchecked(p).contains_integer);
}

TEST_CASE("coarse sampling is detected") {
  const SymplecticPath p = make_path(3, [](double t) { return rot(kTwoPi * t); });
  CHECK_THROWS_CODE(winding_number(p, Vec2(1.0, 0.0)), ErrorCode::SamplingTooCoarse);
}

TEST_CASE("winding is antipodally symmetric") {
  const SymplecticPath p = analytic_monodromy_oracle(preset("validated"), OrbitLabel::P2, 256);
  for (double phi : {0.1, 0.7, 1.3, 2.9}) {
    const Vec2 z(std::cos(phi), std::sin(phi));
    CHECK(std::abs(winding_number(p, z) - winding_number(p, -z)) < 1e-12);
  }
}

TEST_CASE("exp_offdiag against a Taylor series") {
  for (auto [k1, k2, s] : {std::tuple{0.63, -0.76, 3.1}, std::tuple{0.125, 1.0, 3.14}, std::tuple{-0.75, 2.57, 3.66},
                           std::tuple{0.0, 0.0, 1.0}}) {
    Mat2 K;
    K << 0.0, k1, k2, 0.0;
    CHECK((exp_offdiag(k1, k2, s) - expm_series(s * K)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("numeric linearized flow agrees with the analytic oracle") {
  const HamiltonianParams p = preset("validated");
  const SpecialOrbits so = special_orbits(p);
  for (OrbitLabel L : {OrbitLabel::P1, OrbitLabel::P2, OrbitLabel::P3}) {
    const SymplecticPath num = restrict_linearized_to_xi(p, so.orbit(L), FrameKind::rho_orbit_frame, 128);
    const SymplecticPath ana = analytic_monodromy_oracle(p, L, 128);
    double diff = 0.0;
    for (std::size_t j = 0; j < num.size(); ++j)
      diff = std::max(diff, (num.matrices[j] - ana.matrices[j]).cwiseAbs().maxCoeff());
    CHECK(diff < 1e-8);
    for (const Mat2& m : num.matrices) CHECK(std::abs(m.determinant() - 1.0) < 1e-9);
  }
}

TEST_CASE("Conley-Zehnder indices (1, 2, 3) by interval and oracle, frame correction 1") {
  const HamiltonianParams p = preset("validated");
  const SpecialOrbits so = special_orbits(p);
  const int expect[3] = {1, 2, 3};
  int k = 0;
  for (OrbitLabel L : {OrbitLabel::P1, OrbitLabel::P2, OrbitLabel::P3}) {
    const int corr = special_frame_correction(p, so.orbit(L));
    CHECK(corr == 1);
    const SymplecticPath num = restrict_linearized_to_xi(p, so.orbit(L), FrameKind::rho_orbit_frame, 256);
    const SymplecticPath glo = restrict_linearized_to_xi(p, so.orbit(L), FrameKind::global_frame, 256);
    const SymplecticPath ana = analytic_monodromy_oracle(p, L, 256);
    CHECK(cz_index(num, corr).mu_global == expect[k]);
    CHECK(cz_index(ana, corr, {}, CZMethod::analytic_oracle).mu_global == expect[k]);
    CHECK(cz_index(glo, 0).mu_global == expect[k]);
    // the global interval is the rho interval shifted by the correction
    const WindingInterval wr = winding_interval(num), wg = winding_interval(glo);
    CHECK(wg.lo == doctest::Approx(wr.lo + corr).epsilon(1e-6));
    CHECK(wg.hi == doctest::Approx(wr.hi + corr).epsilon(1e-6));
    CHECK(wr.hi - wr.lo < 0.5);
    ++k;
  }
}

TEST_CASE("iterates") {
  const HamiltonianParams p = preset("validated");
  const SpecialOrbits so = special_orbits(p);
  const std::vector<int> p1 = {1, 3, 3, 5}, p3 = {3, 7, 11, 15};
  const SymplecticPath a = restrict_linearized_to_xi(p, so.P1, FrameKind::rho_orbit_frame, 256);
  const SymplecticPath b = restrict_linearized_to_xi(p, so.P2, FrameKind::rho_orbit_frame, 256);
  const SymplecticPath c = restrict_linearized_to_xi(p, so.P3, FrameKind::rho_orbit_frame, 256);
  for (int k = 1; k <= 4; ++k) {
    CHECK(iterate_index(a, k, 1).mu_global == p1[k - 1]);
    CHECK(iterate_index(b, k, 1).mu_global == 2 * k);
    CHECK(iterate_index(c, k, 1).mu_global == p3[k - 1]);
  }
  const SymplecticPath it = iterate_path(b, 3);
  CHECK(it.size() == 3 * 256 + 1);
  const SymplecticPath rs = iterate_path_resampled(b, 3);
  CHECK(rs.size() == 257);
  const Mat2 m1 = b.matrices.back();
  CHECK((rs.matrices.back() - m1 * m1 * m1).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((it.matrices.back() - rs.matrices.back()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("trivialization winding of a frame against itself is zero") {
  FrameSamples f;
  for (int j = 0; j <= 64; ++j) {
    const double t = kTwoPi * (j % 64) / 64;
    f.emplace_back(Vec4(std::cos(t), std::sin(t), 0, 0), Vec4(-std::sin(t), std::cos(t), 0, 0));
  }
  CHECK(trivialization_winding(f, f) == 0);
}

TEST_CASE("eigenframe on P2 and the quadrant dichotomy") {
  const HamiltonianParams p = preset("validated");
  const SpecialOrbits so = special_orbits(p);
  const EigenFrame ef = eigenframe(p, so.P2, 128);
  CHECK(ef.multiplier_beta > 1.0);
  CHECK(ef.eig_residual < 1e-6);
  for (std::size_t j = 0; j < ef.base.size(); ++j) CHECK(dlambda(ef.v_minus[j], ef.v_plus[j]) > 0.0);

  const QuadrantReport neg = eigenframe_and_quadrants(p, so.P2, rho_test_section(p, so.P2, 0.0, 0.3), 64);
  CHECK(neg.pairing_sign == PairingSign::negative);
  for (Quadrant q : neg.quadrants) CHECK((q == Quadrant::II || q == Quadrant::IV));

  const QuadrantReport pos = eigenframe_and_quadrants(p, so.P2, rho_test_section(p, so.P2, kPi / 2, 0.03), 64);
  CHECK(pos.pairing_sign == PairingSign::positive);
  for (Quadrant q : pos.quadrants) CHECK((q == Quadrant::I || q == Quadrant::III));

  // the contracting eigen-direction itself has vanishing pairing
  const double phi_e = std::atan2(1.0, std::sqrt(so.c2.k1 / so.c2.k2));
  const QuadrantReport eig = eigenframe_and_quadrants(p, so.P2, rho_test_section(p, so.P2, phi_e, 0.0), 64);
  CHECK(eig.near_zero_pairing);

  CHECK_THROWS_CODE(eigenframe(p, so.P3, 64), ErrorCode::NotHyperbolic);
  const Section zero = [](double) { return Vec4::Zero(); };
  CHECK_THROWS_CODE(eigenframe_and_quadrants(p, so.P2, zero, 64), ErrorCode::VanishingSection);
}

TEST_CASE("classify_quadrant by coordinates in the eigenbasis") {
  const Vec4 vm(1, 0, 0, 0), vp(0, 1, 0, 0);
  CHECK(classify_quadrant(Vec4(1, 1, 0, 0), vm, vp) == Quadrant::I);
  CHECK(classify_quadrant(Vec4(-1, 1, 0, 0), vm, vp) == Quadrant::II);
  CHECK(classify_quadrant(Vec4(-1, -1, 0, 0), vm, vp) == Quadrant::III);
  CHECK(classify_quadrant(Vec4(1, -1, 0, 0), vm, vp) == Quadrant::IV);
}
