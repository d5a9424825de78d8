#include "reeb321/knots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "reeb321/orbits.hpp"

namespace reeb {

ClosedCurve ClosedCurve::reversed() const {
  ClosedCurve c;
  c.samples.assign(samples.rbegin(), samples.rend());
  c.orientation = -orientation;
  return c;
}

ClosedCurve curve_from_loop(const std::vector<State4>& loop) {
  ClosedCurve c;
  c.samples = loop;
  if (c.samples.size() > 1 && (c.samples.front() - c.samples.back()).norm() < 1e-12) c.samples.pop_back();
  if (c.samples.size() < 8) throw Error(ErrorCode::PreconditionViolation, "curve needs at least 8 samples");
  return c;
}

ClosedCurve orbit_curve(const ReebOrbit& orbit, int n_samples) {
  return curve_from_loop(special_orbit_loop(orbit, n_samples));
}

double min_separation(const ClosedCurve& a, const ClosedCurve& b) {
  double m = std::numeric_limits<double>::infinity();
  for (const State4& x : a.samples)
    for (const State4& y : b.samples) m = std::min(m, (x - y).squaredNorm());
  return std::sqrt(m);
}

namespace {

std::vector<State4> unit_samples(const ClosedCurve& c) {
  std::vector<State4> out;
  out.reserve(c.samples.size());
  for (const State4& z : c.samples) {
    const double r = z.norm();
    if (r < 1e-12) throw Error(ErrorCode::PreconditionViolation, "curve passes through the origin");
    out.push_back(z / r);
  }
  return out;
}

// Orthonormal basis of the complement of N with det[-N, e1, e2, e3] > 0.
std::array<Vec4, 3> complement_basis(const State4& N) {
  Eigen::Matrix4d B;
  B.col(0) = N;
  int k = 1;
  for (int i = 0; i < 4 && k < 4; ++i) {
    Vec4 e = Vec4::Unit(i);
    for (int j = 0; j < k; ++j) e -= B.col(j).dot(e) * B.col(j);
    if (e.norm() > 0.3) B.col(k++) = e.normalized();
  }
  Eigen::Matrix4d M;
  M << -N, B.col(1), B.col(2), B.col(3);
  if (M.determinant() < 0.0) B.col(3) = -B.col(3);
  return {B.col(1), B.col(2), B.col(3)};
}

}  // namespace

Projection stereographic_project_from(const std::vector<ClosedCurve>& curves, const State4& pole) {
  Projection out;
  out.pole = pole.normalized();
  const auto e = complement_basis(out.pole);
  out.pole_distance = std::numeric_limits<double>::infinity();
  for (const ClosedCurve& c : curves) {
    std::vector<Vec3> proj;
    for (const State4& x : unit_samples(c)) {
      out.pole_distance = std::min(out.pole_distance, (x - out.pole).norm());
      const double den = 1.0 - x.dot(out.pole);
      proj.emplace_back(x.dot(e[0]) / den, x.dot(e[1]) / den, x.dot(e[2]) / den);
    }
    out.curves.push_back(std::move(proj));
  }
  return out;
}

Projection stereographic_project(const std::vector<ClosedCurve>& curves, const Tolerances& tol,
                                 std::uint64_t seed) {
  for (std::size_t i = 0; i < curves.size(); ++i)
    for (std::size_t j = i + 1; j < curves.size(); ++j)
      if (min_separation(curves[i], curves[j]) < tol.sep)
        throw Error(ErrorCode::PreconditionViolation, "curves are not disjoint");
  std::vector<std::vector<State4>> unit;
  for (const ClosedCurve& c : curves) unit.push_back(unit_samples(c));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  State4 best = State4::Zero();
  double best_d = -1.0;
  for (int k = 0; k < 64; ++k) {
    State4 cand(g(rng), g(rng), g(rng), g(rng));
    cand.normalize();
    double d = std::numeric_limits<double>::infinity();
    for (const auto& u : unit)
      for (const State4& x : u) d = std::min(d, (x - cand).norm());
    if (d > best_d) {
      best_d = d;
      best = cand;
    }
  }
  if (best_d < tol.pole) {
    std::ostringstream os;
    os << "best pole distance " << best_d;
    throw Error(ErrorCode::NoSafePole, os.str());
  }
  return stereographic_project_from(curves, best);
}

namespace {

std::vector<Vec3> tangents(const std::vector<Vec3>& z) {
  static constexpr double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  const int n = static_cast<int>(z.size());
  std::vector<Vec3> d(n);
  for (int j = 0; j < n; ++j) {
    Vec3 acc = Vec3::Zero();
    for (int k = 1; k <= 4; ++k) acc += c[k - 1] * (z[(j + k) % n] - z[((j - k) % n + n) % n]);
    d[j] = acc;
  }
  return d;
}

}  // namespace

LinkingResult gauss_linking(const std::vector<Vec3>& c1, const std::vector<Vec3>& c2, const Tolerances& tol) {
  if (c1.size() < 8 || c2.size() < 8) throw Error(ErrorCode::PreconditionViolation, "curves too short");
  const auto t1 = tangents(c1);
  const auto t2 = tangents(c2);
  double s = 0.0;
  for (std::size_t i = 0; i < c1.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < c2.size(); ++j) {
      const Vec3 d = c1[i] - c2[j];
      const double r = std::max(d.norm(), 1e-9);
      row += d.dot(t1[i].cross(t2[j])) / (r * r * r);
    }
    s += row;
  }
  LinkingResult out;
  out.raw = s / (4.0 * kPi);
  out.lk = static_cast<int>(std::lround(out.raw));
  out.guard = std::abs(out.raw - out.lk);
  if (out.guard > tol.rounding_guard) {
    std::ostringstream os;
    os << "Gauss integral " << out.raw << " is not near an integer";
    throw Error(ErrorCode::RoundingUnsafe, os.str());
  }
  return out;
}

LinkingResult linking_number(const ClosedCurve& c1, const ClosedCurve& c2, const Tolerances& tol,
                             std::uint64_t seed) {
  const Projection pr = stereographic_project({c1, c2}, tol, seed);
  LinkingResult r = gauss_linking(pr.curves[0], pr.curves[1], tol);
  r.pole_distance = pr.pole_distance;
  return r;
}

ClosedCurve pushoff(const HamiltonianParams& p, const ClosedCurve& curve, const NodeSection& section,
                    double offset, const Tolerances& tol) {
  ClosedCurve out;
  out.orientation = curve.orientation;
  for (const State4& z : curve.samples) {
    const Vec4 v = section(z);
    if (v.norm() < tol.frame) throw Error(ErrorCode::PreconditionViolation, "push-off section vanishes");
    out.samples.push_back(surface_project(p, z + offset * v.normalized(), tol));
  }
  if (min_separation(curve, out) < tol.sep) throw Error(ErrorCode::OffsetTooLarge, "push-off meets the curve");
  return out;
}

SelfLinkResult self_linking(const HamiltonianParams& p, const ReebOrbit& orbit, const Tolerances& tol,
                            PushoffFrame frame, std::uint64_t seed) {
  const ClosedCurve c = orbit_curve(orbit, tol.curve_samples);
  const NodeSection sec = [&](const State4& z) {
    const ContactFrame f = contact_frame(p, z, tol.frame);
    return frame == PushoffFrame::xbar1 ? f.Xbar1 : f.Xbar2;
  };
  const ClosedCurve push = pushoff(p, c, sec, tol.pushoff_offset, tol);
  SelfLinkResult r;
  r.offset = tol.pushoff_offset;
  r.min_separation = min_separation(c, push);
  r.link = linking_number(c, push, tol, seed);
  return r;
}

}  // namespace reeb
