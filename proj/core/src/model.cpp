#include "reeb321/model.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "reeb321/ode.hpp"

namespace reeb {

double h2(const HamiltonianParams& p, double x, double y) {
  const double e = p.epsilon, r2 = x * x + y * y;
  return 0.5 * r2 * r2 + e * p.a * x * x * x + e * p.b * x * y * y + e * e * p.c * x * x +
         e * e * p.d * y * y;
}

Vec2 h2_gradient(const HamiltonianParams& p, double x, double y) {
  const double e = p.epsilon, r2 = x * x + y * y;
  const double Q = 2.0 * x * r2 + 3.0 * e * p.a * x * x + e * p.b * y * y + 2.0 * e * e * p.c * x;
  const double P = 2.0 * y * r2 + 2.0 * e * p.b * x * y + 2.0 * e * e * p.d * y;
  return {Q, P};
}

Mat2 h2_hessian(const HamiltonianParams& p, double x, double y) {
  const double e = p.epsilon;
  Mat2 m;
  m(0, 0) = 6.0 * x * x + 2.0 * y * y + 6.0 * e * p.a * x + 2.0 * e * e * p.c;
  m(0, 1) = m(1, 0) = 4.0 * x * y + 2.0 * e * p.b * y;
  m(1, 1) = 2.0 * x * x + 6.0 * y * y + 2.0 * e * p.b * x + 2.0 * e * e * p.d;
  return m;
}

HamiltonianValue hamiltonian_eval(const HamiltonianParams& p, const State4& z) {
  HamiltonianValue v;
  v.H = 0.5 * (z[0] * z[0] + z[1] * z[1]) + h2(p, z[2], z[3]);
  const Vec2 g = h2_gradient(p, z[2], z[3]);
  v.gradient << z[0], z[1], g[0], g[1];
  v.hessian.setZero();
  v.hessian(0, 0) = v.hessian(1, 1) = 1.0;
  v.hessian.block<2, 2>(2, 2) = h2_hessian(p, z[2], z[3]);
  return v;
}

double energy(const HamiltonianParams& p, const State4& z) {
  return 0.5 * (z[0] * z[0] + z[1] * z[1]) + h2(p, z[2], z[3]);
}

double liouville(const State4& z, const Vec4& u) {
  return 0.5 * (z[0] * u[1] - z[1] * u[0] + z[2] * u[3] - z[3] * u[2]);
}

double dlambda(const Vec4& u, const Vec4& v) {
  return u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2];
}

ContactPairing contact_eval(const State4& z, const Vec4& u, const Vec4& v) {
  return {liouville(z, u), dlambda(u, v)};
}

Vec4 hamiltonian_field(const HamiltonianParams& p, const State4& z) {
  const Vec2 g = h2_gradient(p, z[2], z[3]);
  return Vec4(-z[1], z[0], -g[1], g[0]);
}

namespace {

// lambda0(X_H) = (x1^2 + y1^2 + x2 Q + y2 P) / 2
double lambda_xh(const HamiltonianParams& p, const State4& z) {
  const Vec2 g = h2_gradient(p, z[2], z[3]);
  return 0.5 * (z[0] * z[0] + z[1] * z[1] + z[2] * g[0] + z[3] * g[1]);
}

void check_frame_pair(const Vec4& f1, const Vec4& f2, double frame_tol) {
  if (std::abs(dlambda(f1, f2)) < frame_tol)
    throw Error(ErrorCode::DegenerateFrame, "frame vectors span a dlambda-null plane");
}

}  // namespace

VectorFields vector_fields(const HamiltonianParams& p, const State4& z) {
  VectorFields vf;
  vf.xh = hamiltonian_field(p, z);
  const double l = lambda_xh(p, z);
  if (!(l > 0.0)) throw Error(ErrorCode::NotStarShaped, "lambda0(X_H) <= 0");
  vf.h = 1.0 / l;
  vf.reeb = vf.h * vf.xh;
  return vf;
}

Mat4 hamiltonian_jacobian(const HamiltonianParams& p, const State4& z) {
  const Mat2 hs = h2_hessian(p, z[2], z[3]);
  Mat4 m = Mat4::Zero();
  m(0, 1) = -1.0;
  m(1, 0) = 1.0;
  m(2, 2) = -hs(1, 0);
  m(2, 3) = -hs(1, 1);
  m(3, 2) = hs(0, 0);
  m(3, 3) = hs(0, 1);
  return m;
}

Mat4 reeb_jacobian(const HamiltonianParams& p, const State4& z) {
  const Vec2 g = h2_gradient(p, z[2], z[3]);
  const Mat2 hs = h2_hessian(p, z[2], z[3]);
  const double D = z[0] * z[0] + z[1] * z[1] + z[2] * g[0] + z[3] * g[1];
  const double h = 2.0 / D;
  Vec4 dD;
  dD << 2.0 * z[0], 2.0 * z[1], g[0] + z[2] * hs(0, 0) + z[3] * hs(1, 0),
      z[2] * hs(0, 1) + g[1] + z[3] * hs(1, 1);
  const Vec4 dh = -2.0 / (D * D) * dD;
  return h * hamiltonian_jacobian(p, z) + hamiltonian_field(p, z) * dh.transpose();
}

Vec2 ContactFrame::coords(const Vec4& v) const { return frame_coordinates(v, Xbar1, Xbar2, reeb); }

Vec4 ContactFrame::project(const Vec4& v) const {
  const Vec2 c = coords(v);
  return c[0] * Xbar1 + c[1] * Xbar2;
}

Vec4 ContactFrame::apply_J(const Vec4& v) const {
  const Vec2 c = coords(v);
  return -c[1] * Xbar1 + c[0] * Xbar2;
}

ContactFrame contact_frame(const HamiltonianParams& p, const State4& z, double frame_tol) {
  const HamiltonianValue hv = hamiltonian_eval(p, z);
  const double n = hv.gradient.norm();
  if (n == 0.0) throw Error(ErrorCode::DegenerateFrame, "gradient of H vanishes");
  const Vec4 u = hv.gradient / n;
  ContactFrame f;
  f.base = z;
  f.X1 = Vec4(u[3], u[2], -u[1], -u[0]);
  f.X2 = Vec4(-u[2], u[3], u[0], -u[1]);
  f.X3 = Vec4(-u[1], u[0], -u[3], u[2]);
  const double l3 = liouville(z, f.X3);
  if (std::abs(l3) < frame_tol) throw Error(ErrorCode::DegenerateFrame, "lambda0(X3) vanishes");
  f.Xbar1 = f.X1 - liouville(z, f.X1) / l3 * f.X3;
  f.Xbar2 = f.X2 - liouville(z, f.X2) / l3 * f.X3;
  f.reeb = f.X3 / l3;
  return f;
}

std::pair<Vec4, Vec4> rho_frame(const HamiltonianParams& p, const State4& z, double frame_tol) {
  const ContactFrame f = contact_frame(p, z, frame_tol);
  const double l3 = liouville(z, f.X3);
  const Vec4 ex(0, 0, 1, 0), ey(0, 0, 0, 1);
  return {ex - liouville(z, ex) / l3 * f.X3, ey - liouville(z, ey) / l3 * f.X3};
}

State4 surface_project(const HamiltonianParams& p, const State4& z, const Tolerances& tol) {
  const HamiltonianValue hv = hamiltonian_eval(p, z);
  double r = hv.H - 0.5;
  if (std::abs(r) <= tol.surface) return z;
  if (std::abs(r) >= tol.capture_radius)
    throw Error(ErrorCode::NoConvergence, "point outside the capture radius of the surface");
  const Vec4 dir = hv.gradient;
  double t = 0.0;
  for (int it = 0; it < tol.max_newton; ++it) {
    const HamiltonianValue w = hamiltonian_eval(p, z + t * dir);
    r = w.H - 0.5;
    if (std::abs(r) <= 0.1 * tol.surface) return z + t * dir;
    const double slope = w.gradient.dot(dir);
    if (slope == 0.0) break;
    t -= r / slope;
  }
  if (std::abs(energy(p, z + t * dir) - 0.5) <= tol.surface) return z + t * dir;
  throw Error(ErrorCode::NoConvergence, "surface projection did not converge");
}

namespace {

OdeRhs flow_rhs(const HamiltonianParams& p, TimeKind kind, bool variational) {
  return [p, kind, variational](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    const State4 z = y.head<4>();
    Vec4 f;
    if (kind == TimeKind::hamiltonian) {
      f = hamiltonian_field(p, z);
    } else {
      const Vec2 g = h2_gradient(p, z[2], z[3]);
      const double D = z[0] * z[0] + z[1] * z[1] + z[2] * g[0] + z[3] * g[1];
      if (!(D > 0.0)) throw Error(ErrorCode::NotStarShaped, "lambda0(X_H) <= 0 along the flow");
      f = (2.0 / D) * Vec4(-z[1], z[0], -g[1], g[0]);
    }
    dy.head<4>() = f;
    if (variational) {
      const Mat4 A = kind == TimeKind::hamiltonian ? hamiltonian_jacobian(p, z) : reeb_jacobian(p, z);
      Eigen::Map<const Mat4> M(y.data() + 4);
      Eigen::Map<Mat4> dM(dy.data() + 4);
      dM = A * M;
    }
  };
}

}  // namespace

Trajectory integrate_flow(const HamiltonianParams& p, const State4& z0, double T, TimeKind kind,
                          const FlowOptions& opt) {
  if (!(opt.tol > 0.0)) throw Error(ErrorCode::PreconditionViolation, "tol must be positive");
  const bool var = opt.with_variational;
  Eigen::VectorXd y0(var ? 20 : 4);
  y0.head<4>() = z0;
  if (var) Eigen::Map<Mat4>(y0.data() + 4) = Mat4::Identity();

  OdeOptions oo;
  oo.tol = opt.tol;
  oo.min_step = opt.min_step;

  Trajectory tr;
  tr.time_kind = kind;
  const double H0 = energy(p, z0);
  const bool only_stops = !opt.output_times.empty();
  auto obs = [&](double t, const Eigen::VectorXd& y, int stop) {
    if (only_stops && stop < 0 && !tr.times.empty()) return true;
    tr.times.push_back(t);
    const State4 z = y.head<4>();
    tr.states.push_back(z);
    tr.energy_drift = std::max(tr.energy_drift, std::abs(energy(p, z) - H0));
    if (var) tr.fundamental.push_back(Eigen::Map<const Mat4>(y.data() + 4));
    return true;
  };
  integrate_dopri(flow_rhs(p, kind, var), 0.0, y0, T, oo, opt.output_times, obs);
  return tr;
}

State4 flow_point(const HamiltonianParams& p, const State4& z0, double T, TimeKind kind, double tol,
                  Mat4* fundamental) {
  const bool var = fundamental != nullptr;
  Eigen::VectorXd y0(var ? 20 : 4);
  y0.head<4>() = z0;
  if (var) Eigen::Map<Mat4>(y0.data() + 4) = Mat4::Identity();
  OdeOptions oo;
  oo.tol = tol;
  const OdeResult r = integrate_dopri(flow_rhs(p, kind, var), 0.0, y0, T, oo);
  if (var) *fundamental = Eigen::Map<const Mat4>(r.y.data() + 4);
  return r.y.head<4>();
}

void write_trajectory_csv(const HamiltonianParams& p, const Trajectory& tr, std::ostream& os) {
  os << "t,x1,y1,x2,y2,H\n";
  char buf[256];
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const State4& z = tr.states[i];
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.15g\n", tr.times[i], z[0], z[1],
                  z[2], z[3], energy(p, z));
    os << buf;
  }
}

const char* orbit_label_name(OrbitLabel l) {
  switch (l) {
    case OrbitLabel::P1: return "P1";
    case OrbitLabel::P2: return "P2";
    case OrbitLabel::P3: return "P3";
    case OrbitLabel::resonant: return "resonant";
    case OrbitLabel::homoclinic_limit: return "homoclinic-limit";
  }
  return "?";
}

std::pair<Vec4, Vec4> frame_basis(const HamiltonianParams& p, const State4& z, FrameKind kind,
                                  double frame_tol) {
  if (kind == FrameKind::rho_orbit_frame) return rho_frame(p, z, frame_tol);
  const ContactFrame f = contact_frame(p, z, frame_tol);
  return {f.Xbar1, f.Xbar2};
}

Vec2 frame_coordinates(const Vec4& v, const Vec4& f1, const Vec4& f2, const Vec4& reeb) {
  Eigen::Matrix<double, 4, 3> A;
  A.col(0) = f1;
  A.col(1) = f2;
  A.col(2) = reeb;
  const Eigen::Vector3d x = A.colPivHouseholderQr().solve(v);
  return {x[0], x[1]};
}

SymplecticPath restrict_linearized_to_xi(const HamiltonianParams& p, const ReebOrbit& orbit,
                                         FrameKind kind, int n_samples, const Tolerances& tol) {
  if (n_samples < 64) throw Error(ErrorCode::PreconditionViolation, "n_samples must be >= 64");
  const double T = orbit.reeb_period;
  std::vector<double> stops(n_samples + 1);
  for (int j = 0; j <= n_samples; ++j) stops[j] = T * j / n_samples;
  stops.back() = T;
  FlowOptions fo;
  fo.with_variational = true;
  fo.tol = std::min(tol.integrator, 1e-12);
  fo.output_times = stops;
  const State4 x0 = orbit.initial_point();
  const Trajectory tr = integrate_flow(p, x0, T, TimeKind::reeb, fo);
  if (tr.states.size() != stops.size())
    throw Error(ErrorCode::NoConvergence, "flow did not reach all sample nodes");
  if ((tr.states.back() - x0).norm() > tol.orbit)
    throw Error(ErrorCode::NotClosed, "orbit does not close within orbit_tol");

  SymplecticPath path;
  path.frame_kind = kind;
  path.orbit = orbit;
  const auto [a1, a2] = frame_basis(p, x0, kind, tol.frame);
  for (int j = 0; j <= n_samples; ++j) {
    const State4& x = tr.states[j];
    path.grid.push_back(static_cast<double>(j) / n_samples);
    path.base_points.push_back(x);
    path.fundamental.push_back(tr.fundamental[j]);
    if (j == 0) {
      path.matrices.push_back(Mat2::Identity());
      continue;
    }
    const auto [b1, b2] = frame_basis(p, x, kind, tol.frame);
    check_frame_pair(b1, b2, tol.frame);
    const Vec4 r = vector_fields(p, x).reeb;
    Mat2 m;
    m.col(0) = frame_coordinates(tr.fundamental[j] * a1, b1, b2, r);
    m.col(1) = frame_coordinates(tr.fundamental[j] * a2, b1, b2, r);
    if (std::abs(m.determinant() - 1.0) > tol.path)
      throw Error(ErrorCode::DegenerateFrame,
                  "restricted map not symplectic at node " + std::to_string(j));
    path.matrices.push_back(m);
  }
  return path;
}

Vec4 lie_derivative_along_orbit(const HamiltonianParams& p, const ReebOrbit& orbit,
                                const Section& eta, double t, double step, double tol) {
  const double T = orbit.reeb_period;
  const State4 x = flow_point(p, orbit.initial_point(), T * t, TimeKind::reeb, tol);
  auto pulled = [&](double s) {
    const State4 y = flow_point(p, x, s, TimeKind::reeb, tol);
    Mat4 M;
    flow_point(p, y, -s, TimeKind::reeb, tol, &M);
    return Vec4(M * eta(t + s / T));
  };
  return (pulled(step) - pulled(-step)) / (2.0 * step);
}

}  // namespace reeb
