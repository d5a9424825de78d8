#include <cmath>
#include <random>
#include <sstream>

#include "reeb321/model.hpp"
#include "reeb321/ode.hpp"
#include "support.hpp"

using namespace reeb;

namespace {

HamiltonianParams validated() { return preset("validated"); }

// Random point of S: pick a direction and solve H(r u) = 1/2 by bisection.
State4 random_surface_point(const HamiltonianParams& p, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  State4 u(g(rng), g(rng), g(rng), g(rng));
  u.normalize();
  double lo = 0.0, hi = 3.0;
  for (int k = 0; k < 200; ++k) {
    const double m = 0.5 * (lo + hi);
    (energy(p, m * u) < 0.5 ? lo : hi) = m;
  }
  return 0.5 * (lo + hi) * u;
}

}  // namespace

TEST_CASE("dopri: linear decay and harmonic oscillator against exact solutions") {
  OdeOptions opt;
  opt.tol = 1e-12;
  const OdeRhs decay = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy = -y; };
  Eigen::VectorXd y0(1);
  y0 << 2.0;
  const OdeResult r = integrate_dopri(decay, 0.0, y0, 3.0, opt);
  CHECK(r.y[0] == doctest::Approx(2.0 * std::exp(-3.0)).epsilon(1e-10));

  const OdeRhs osc = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.resize(2);
    dy << y[1], -y[0];
  };
  Eigen::VectorXd z0(2);
  z0 << 1.0, 0.0;
  std::vector<double> stops = {0.5, 1.0, 2.0};
  std::vector<double> hit;
  const OdeObserver obs = [&](double t, const Eigen::VectorXd& y, int idx) {
    if (idx >= 0) {
      hit.push_back(t);
      CHECK(y[0] == doctest::Approx(std::cos(t)).epsilon(1e-9));
    }
    return true;
  };
  const OdeResult b = integrate_dopri(osc, 0.0, z0, 2.0 * kPi, opt, stops, obs);
  CHECK(hit == stops);
  CHECK(b.y[0] == doctest::Approx(1.0).epsilon(1e-9));

  // backwards
  const OdeResult back = integrate_dopri(osc, 0.0, z0, -1.0, opt);
  CHECK(back.y[0] == doctest::Approx(std::cos(1.0)).epsilon(1e-10));
  CHECK(back.y[1] == doctest::Approx(std::sin(1.0)).epsilon(1e-10));
}

TEST_CASE("dopri: step underflow is reported") {
  OdeOptions opt;
  opt.min_step = 1e-3;
  opt.tol = 1e-14;
  const OdeRhs blow = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy = y.array().square(); };
  Eigen::VectorXd y0(1);
  y0 << 1.0;
  CHECK_THROWS_CODE(integrate_dopri(blow, 0.0, y0, 2.0, opt), ErrorCode::StepUnderflow);
}

TEST_CASE("presets and configuration errors") {
  const HamiltonianParams v = preset("validated");
  CHECK(v.d == doctest::Approx(-0.125));
  CHECK(v.a == doctest::Approx(-5.0 / 3.0));
  const HamiltonianParams f = preset("paper-figure", 1.0);
  CHECK(f.d == doctest::Approx(0.125));
  CHECK(f.epsilon == 1.0);
  CHECK_THROWS_CODE(preset("nope"), ErrorCode::ConfigError);
}

TEST_CASE("H2 gradient and Hessian match finite differences") {
  const HamiltonianParams p = validated();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double x = u(rng), y = u(rng), h = 1e-6;
    const Vec2 g = h2_gradient(p, x, y);
    CHECK(g[0] == doctest::Approx((h2(p, x + h, y) - h2(p, x - h, y)) / (2 * h)).epsilon(1e-7));
    CHECK(g[1] == doctest::Approx((h2(p, x, y + h) - h2(p, x, y - h)) / (2 * h)).epsilon(1e-7));
    const Mat2 H = h2_hessian(p, x, y);
    const Vec2 gx = (h2_gradient(p, x + h, y) - h2_gradient(p, x - h, y)) / (2 * h);
    const Vec2 gy = (h2_gradient(p, x, y + h) - h2_gradient(p, x, y - h)) / (2 * h);
    CHECK((H.col(0) - gx).norm() < 1e-6);
    CHECK((H.col(1) - gy).norm() < 1e-6);
  }
}

TEST_CASE("contact frame: xi spanned by Xbar, Reeb normalization, J on xi") {
  const HamiltonianParams p = validated();
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const State4 z = random_surface_point(p, rng);
    const ContactFrame f = contact_frame(p, z);
    const Vec4 grad = hamiltonian_eval(p, z).gradient;
    // tangency to S
    CHECK(std::abs(grad.dot(f.Xbar1)) < 1e-12);
    CHECK(std::abs(grad.dot(f.Xbar2)) < 1e-12);
    CHECK(std::abs(grad.dot(f.reeb)) < 1e-12);
    // xi = ker lambda
    CHECK(std::abs(liouville(z, f.Xbar1)) < 1e-12);
    CHECK(std::abs(liouville(z, f.Xbar2)) < 1e-12);
    CHECK(liouville(z, f.reeb) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dlambda(f.Xbar1, f.Xbar2) > 0.0);
    // R is h X_H and annihilates d lambda on TS
    const VectorFields vf = vector_fields(p, z);
    CHECK((vf.reeb - f.reeb).norm() < 1e-10);
    CHECK(std::abs(dlambda(f.reeb, f.Xbar1)) < 1e-10);
    CHECK(std::abs(dlambda(f.reeb, f.Xbar2)) < 1e-10);
    // J maps Xbar1 -> Xbar2 -> -Xbar1
    CHECK((f.apply_J(f.Xbar1) - f.Xbar2).norm() < 1e-10);
    CHECK((f.apply_J(f.Xbar2) + f.Xbar1).norm() < 1e-10);
    const Vec2 c = f.coords(2.0 * f.Xbar1 - 3.0 * f.Xbar2 + 5.0 * f.reeb);
    CHECK(c[0] == doctest::Approx(2.0));
    CHECK(c[1] == doctest::Approx(-3.0));
  }
}

TEST_CASE("Reeb Jacobian matches finite differences of the Reeb field") {
  const HamiltonianParams p = validated();
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const State4 z = random_surface_point(p, rng);
    const Mat4 J = reeb_jacobian(p, z);
    const double h = 1e-6;
    for (int i = 0; i < 4; ++i) {
      const Vec4 e = Vec4::Unit(i) * h;
      auto R = [&](const State4& w) {
        const HamiltonianValue hv = hamiltonian_eval(p, w);
        const Vec4 xh = hamiltonian_field(p, w);
        return Vec4(2.0 / w.dot(hv.gradient) * xh);
      };
      CHECK(((R(z + e) - R(z - e)) / (2 * h) - J.col(i)).norm() < 1e-6);
    }
  }
}

TEST_CASE("flows conserve energy; surface projection lands on S") {
  const HamiltonianParams p = validated();
  std::mt19937_64 rng(7);
  const State4 z = random_surface_point(p, rng);
  FlowOptions opt;
  opt.tol = 1e-11;
  const Trajectory tr = integrate_flow(p, z, 10.0, TimeKind::reeb, opt);
  CHECK(tr.energy_drift < 1e-9);
  const State4 q = surface_project(p, z * 1.01);
  CHECK(std::abs(energy(p, q) - 0.5) < 1e-10);

  // variational flow against finite differences of the endpoint map
  Mat4 M;
  flow_point(p, z, 2.0, TimeKind::reeb, 1e-12, &M);
  const double h = 1e-6;
  for (int i = 0; i < 4; ++i) {
    const Vec4 d = (flow_point(p, z + h * Vec4::Unit(i), 2.0, TimeKind::reeb) -
                    flow_point(p, z - h * Vec4::Unit(i), 2.0, TimeKind::reeb)) /
                   (2 * h);
    CHECK((d - M.col(i)).norm() < 1e-5);
  }
  std::ostringstream os;
  write_trajectory_csv(p, tr, os);
  CHECK(os.str().rfind("t,x1,y1,x2,y2,H\n", 0) == 0);
}

TEST_CASE("points off the star-shaped region are rejected") {
  const HamiltonianParams p = validated();
  CHECK_THROWS_CODE(vector_fields(p, State4::Zero()), ErrorCode::NotStarShaped);
}
