#include "reeb321/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "reeb321/ode.hpp"

namespace reeb {

const char* signature_name(HessianSignature s) {
  switch (s) {
    case HessianSignature::min: return "min";
    case HessianSignature::max: return "max";
    case HessianSignature::saddle: return "saddle";
    case HessianSignature::degenerate: return "degenerate";
  }
  return "?";
}

const char* flow_type_name(FlowType f) { return f == FlowType::hyperbolic ? "hyperbolic" : "elliptic"; }

CriticalPoint classify_critical_point(const HamiltonianParams& p, const Vec2& z) {
  CriticalPoint cp;
  cp.location = z;
  cp.h2_value = h2(p, z[0], z[1]);
  cp.on_axis = z[1] == 0.0;
  const Mat2 hs = h2_hessian(p, z[0], z[1]);
  const double det = hs.determinant();
  const double scale = std::max(1.0, hs.norm());
  if (std::abs(det) < 1e-14 * scale * scale) {
    cp.signature = HessianSignature::degenerate;
  } else if (det < 0.0) {
    cp.signature = HessianSignature::saddle;
  } else {
    cp.signature = hs(0, 0) > 0.0 ? HessianSignature::min : HessianSignature::max;
  }
  const double r2 = 1.0 - 2.0 * cp.h2_value;
  const double h = r2 > 0.0 ? 2.0 / r2 : std::numeric_limits<double>::quiet_NaN();
  cp.k1 = -h * hs(1, 1);
  cp.k2 = h * hs(0, 0);
  cp.flow_type = det < 0.0 ? FlowType::hyperbolic : FlowType::elliptic;
  return cp;
}

namespace {

Vec2 newton_critical(const HamiltonianParams& p, Vec2 z, int max_it, bool* ok, double crit_tol) {
  *ok = false;
  for (int it = 0; it < max_it; ++it) {
    const Vec2 g = h2_gradient(p, z[0], z[1]);
    if (g.norm() <= crit_tol) {
      *ok = true;
      return z;
    }
    const Mat2 hs = h2_hessian(p, z[0], z[1]);
    if (std::abs(hs.determinant()) < 1e-300) return z;
    z -= hs.inverse() * g;
    if (!z.allFinite() || z.norm() > 1e6) return z;
  }
  *ok = h2_gradient(p, z[0], z[1]).norm() <= crit_tol;
  return z;
}

}  // namespace

CriticalPointReport find_critical_points(const HamiltonianParams& p, const Tolerances& tol) {
  const double e = p.epsilon;
  std::vector<Vec2> found;
  auto add = [&](const Vec2& z) {
    for (const Vec2& f : found)
      if ((f - z).norm() < tol.merge) return;
    found.push_back(z);
  };
  // Q(x,0) = x (2x^2 + 3 e a x + 2 e^2 c)
  add(Vec2(0.0, 0.0));
  const double A = 2.0, B = 3.0 * e * p.a, C = 2.0 * e * e * p.c;
  const double disc = B * B - 4.0 * A * C;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    // numerically stable pair
    const double qq = -0.5 * (B + std::copysign(sq, B));
    std::vector<double> roots;
    if (qq != 0.0) {
      roots.push_back(qq / A);
      roots.push_back(C / qq);
    } else {
      roots.push_back(0.0);
    }
    for (double x : roots) {
      for (int it = 0; it < 20; ++it) {
        const double q = 6.0 * x * x + 6.0 * e * p.a * x + 2.0 * e * e * p.c;
        const double v = 2.0 * x * x * x + 3.0 * e * p.a * x * x + 2.0 * e * e * p.c * x;
        if (q == 0.0) break;
        const double dx = v / q;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      add(Vec2(x, 0.0));
    }
  }
  const std::size_t n_axis = found.size();
  // off-axis safety net
  const int n = 41;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 z0(-4.0 * e + 8.0 * e * i / (n - 1), -4.0 * e + 8.0 * e * j / (n - 1));
      bool ok = false;
      const Vec2 z = newton_critical(p, z0, 60, &ok, tol.crit);
      if (!ok || z.cwiseAbs().maxCoeff() > 8.0 * e) continue;
      Vec2 zz = z;
      if (std::abs(zz[1]) < tol.merge) zz[1] = 0.0;
      add(zz);
    }
  }
  CriticalPointReport rep;
  std::vector<Vec2> axis(found.begin(), found.begin() + n_axis);
  std::vector<Vec2> off(found.begin() + n_axis, found.end());
  std::sort(axis.begin(), axis.end(), [](const Vec2& u, const Vec2& v) { return u[0] < v[0]; });
  std::sort(off.begin(), off.end(), [](const Vec2& u, const Vec2& v) {
    return u[0] < v[0] || (u[0] == v[0] && u[1] < v[1]);
  });
  for (const Vec2& z : axis) rep.points.push_back(classify_critical_point(p, z));
  for (const Vec2& z : off) rep.points.push_back(classify_critical_point(p, z));
  for (CriticalPoint& cp : rep.points) cp.on_axis = cp.location[1] == 0.0;
  if (rep.points.size() != 3) {
    rep.structure_ok = false;
    std::ostringstream os;
    os << "StructureMismatch: found " << rep.points.size() << " critical points, expected 3";
    rep.mismatch = os.str();
  } else {
    for (const CriticalPoint& cp : rep.points) {
      if (cp.location.norm() == 0.0 && cp.signature != HessianSignature::saddle) {
        rep.structure_ok = false;
        rep.mismatch = std::string("StructureMismatch: origin is ") + signature_name(cp.signature) +
                       ", expected saddle";
      }
    }
  }
  return rep;
}

const ReebOrbit& SpecialOrbits::orbit(OrbitLabel l) const {
  if (l == OrbitLabel::P1) return P1;
  if (l == OrbitLabel::P3) return P3;
  return P2;
}

const CriticalPoint& SpecialOrbits::point(OrbitLabel l) const {
  if (l == OrbitLabel::P1) return c1;
  if (l == OrbitLabel::P3) return c3;
  return c2;
}

SpecialOrbits special_orbits_unchecked(const HamiltonianParams& p, const Tolerances& tol) {
  const CriticalPointReport rep = find_critical_points(p, tol);
  std::vector<CriticalPoint> pos;
  const CriticalPoint* origin = nullptr;
  for (const CriticalPoint& cp : rep.points) {
    if (!cp.on_axis) continue;
    if (cp.location[0] == 0.0) origin = &cp;
    else if (cp.location[0] > 0.0) pos.push_back(cp);
  }
  if (origin == nullptr || pos.size() != 2)
    throw Error(ErrorCode::HypothesisFailure,
                "need the origin and two positive axis critical points of H2");
  SpecialOrbits so;
  so.c2 = *origin;
  so.c1 = pos[0];
  so.c3 = pos[1];
  auto make = [&](const CriticalPoint& cp, OrbitLabel label) {
    const double r2 = 1.0 - 2.0 * cp.h2_value;
    if (!(r2 > 0.0)) throw Error(ErrorCode::HypothesisFailure, "critical point above the energy cap");
    ReebOrbit o;
    o.label = label;
    o.z2_datum = cp.location;
    o.r = std::sqrt(r2);
    o.reeb_period = kPi * r2;
    return o;
  };
  so.P1 = make(so.c1, OrbitLabel::P1);
  so.P2 = make(so.c2, OrbitLabel::P2);
  so.P3 = make(so.c3, OrbitLabel::P3);
  const double T1 = so.P1.reeb_period, T2 = so.P2.reeb_period, T3 = so.P3.reeb_period;
  so.chain = {
      {"H2(p3,0) < 0", so.c3.h2_value, 0.0, so.c3.h2_value < 0.0},
      {"0 < H2(p1,0)", 0.0, so.c1.h2_value, 0.0 < so.c1.h2_value},
      {"T1 < T2", T1, T2, T1 < T2},
      {"T2 < T3", T2, T3, T2 < T3},
      {"T3 < 2T1", T3, 2.0 * T1, T3 < 2.0 * T1},
  };
  so.chain_ok = std::all_of(so.chain.begin(), so.chain.end(), [](const auto& c) { return c.holds; });
  so.pattern_ok = so.c1.k1 > 0 && so.c1.k2 < 0 && so.c2.k1 > 0 && so.c2.k2 > 0 && so.c3.k1 < 0 &&
                  so.c3.k2 > 0;
  return so;
}

SpecialOrbits special_orbits(const HamiltonianParams& p, const Tolerances& tol) {
  SpecialOrbits so = special_orbits_unchecked(p, tol);
  for (const InequalityCheck& c : so.chain) {
    if (!c.holds) {
      std::ostringstream os;
      os.precision(12);
      os << c.name << " violated (" << c.lhs << " vs " << c.rhs << ")";
      throw Error(ErrorCode::HypothesisFailure, os.str());
    }
  }
  return so;
}

std::vector<State4> special_orbit_loop(const ReebOrbit& orbit, int n) {
  std::vector<State4> out;
  out.reserve(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double th = kTwoPi * orbit.multiplicity * (j == n ? 0 : j) / n;
    out.emplace_back(orbit.r * std::cos(th), orbit.r * std::sin(th), orbit.z2_datum[0],
                     orbit.z2_datum[1]);
  }
  return out;
}

namespace {

// Eighth-order periodic first derivative with unit spacing.
template <class V>
std::vector<V> periodic_derivative(const std::vector<V>& z) {
  static constexpr double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  const int n = static_cast<int>(z.size());
  std::vector<V> d(n);
  for (int j = 0; j < n; ++j) {
    V acc = V::Zero();
    for (int k = 1; k <= 4; ++k) acc += c[k - 1] * (z[(j + k) % n] - z[((j - k) % n + n) % n]);
    d[j] = acc;
  }
  return d;
}

}  // namespace

double orbit_action(const std::vector<State4>& loop, double orbit_tol) {
  if (loop.size() < 2) throw Error(ErrorCode::NotClosed, "loop needs at least two samples");
  if ((loop.back() - loop.front()).norm() > orbit_tol)
    throw Error(ErrorCode::NotClosed, "loop closure gap exceeds orbit_tol");
  std::vector<State4> z(loop.begin(), loop.end() - 1);
  if (z.size() < 9) throw Error(ErrorCode::PreconditionViolation, "loop needs at least 9 samples");
  const std::vector<State4> d = periodic_derivative(z);
  double s = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) s += liouville(z[j], d[j]);
  return s;
}

namespace {

using VecX = Eigen::VectorXd;

OdeRhs planar_rhs(const HamiltonianParams& p) {
  return [p](double, const VecX& y, VecX& dy) {
    const Vec2 g = h2_gradient(p, y[0], y[1]);
    dy[0] = -g[1];
    dy[1] = g[0];
    dy[2] = 0.5 * (y[0] * g[0] + y[1] * g[1]);
  };
}

// Bisection in time for a sign change of fn between (ta, ya) and tb.
std::pair<double, VecX> refine_event(const OdeRhs& rhs, double ta, VecX ya, double tb,
                                     const std::function<double(const VecX&)>& fn,
                                     const OdeOptions& oo) {
  const double fa = fn(ya);
  VecX yb = integrate_dopri(rhs, ta, ya, tb, oo).y;
  for (int it = 0; it < 80; ++it) {
    const double tm = 0.5 * (ta + tb);
    if (tm == ta || tm == tb) break;
    const VecX ym = integrate_dopri(rhs, ta, ya, tm, oo).y;
    const double fm = fn(ym);
    if ((fm > 0.0) == (fa > 0.0) && fm != 0.0) {
      ta = tm;
      ya = ym;
    } else {
      tb = tm;
      yb = ym;
    }
    if (std::abs(tb - ta) < 1e-15 * std::max(1.0, std::abs(tb))) break;
  }
  return {tb, yb};
}

double polyline_distance(const Vec2& q, const std::vector<Vec2>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Vec2 a = pts[i], b = pts[i + 1];
    const Vec2 ab = b - a;
    const double l2 = ab.squaredNorm();
    double t = l2 > 0.0 ? (q - a).dot(ab) / l2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, (a + t * ab - q).norm());
  }
  return best;
}

}  // namespace

PlanarLoop planar_period_and_area(const HamiltonianParams& p, double C, const Vec2& seed,
                                  const Tolerances& tol, int n_samples) {
  if (std::abs(h2(p, seed[0], seed[1]) - C) > tol.level)
    throw Error(ErrorCode::PreconditionViolation, "seed is not on the requested level");
  const Vec2 g0 = h2_gradient(p, seed[0], seed[1]);
  if (g0.norm() < 1e-8) throw Error(ErrorCode::PreconditionViolation, "seed is a critical point");
  const Vec2 v0 = Vec2(-g0[1], g0[0]).normalized();
  const OdeRhs rhs = planar_rhs(p);
  const double itol = std::min(tol.integrator, 1e-12);
  OdeOptions oo;
  oo.tol = itol;
  oo.min_step = tol.min_step;
  VecX y0(3);
  y0 << seed[0], seed[1], 0.0;

  double t_prev = 0.0, maxdist = 0.0;
  VecX y_prev = y0;
  bool found = false;
  double t_hit = 0.0;
  auto gfun = [&](const VecX& y) { return (Vec2(y[0], y[1]) - seed).dot(v0); };
  auto obs = [&](double t, const VecX& y, int) {
    const double dist = (Vec2(y[0], y[1]) - seed).norm();
    if (t > 0.0 && gfun(y_prev) < 0.0 && gfun(y) >= 0.0 && dist < 0.1 * maxdist) {
      found = true;
      t_hit = t;
      return false;
    }
    maxdist = std::max(maxdist, dist);
    t_prev = t;
    y_prev = y;
    return true;
  };
  integrate_dopri(rhs, 0.0, y0, tol.no_return_horizon, oo, {}, obs);
  if (!found) {
    std::ostringstream os;
    os << "no return to the seed within " << tol.no_return_horizon << " time units";
    throw Error(ErrorCode::NoReturn, os.str());
  }
  const auto [tau, yt] = refine_event(rhs, t_prev, y_prev, t_hit, gfun, oo);

  PlanarLoop out;
  out.level = C;
  out.tau = tau;
  out.area = yt[2];
  std::vector<double> stops(n_samples + 1);
  for (int j = 0; j <= n_samples; ++j) stops[j] = tau * j / n_samples;
  stops.back() = tau;
  auto rec = [&](double, const VecX& y, int stop) {
    if (stop >= 0) out.samples.emplace_back(y[0], y[1]);
    return true;
  };
  integrate_dopri(rhs, 0.0, y0, tau, oo, stops, rec);
  return out;
}

std::vector<State4> product_loop(double C, const PlanarLoop& loop, int m1, int m2) {
  const int nl = static_cast<int>(loop.samples.size()) - 1;
  const int N = nl * m2;
  const double r = std::sqrt(1.0 - 2.0 * C);
  std::vector<State4> out;
  out.reserve(N + 1);
  for (int j = 0; j <= N; ++j) {
    const int jj = j == N ? 0 : j;
    const double th = kTwoPi * m1 * static_cast<double>(jj) / N;
    const Vec2& z2 = loop.samples[jj % nl];
    out.emplace_back(r * std::cos(th), r * std::sin(th), z2[0], z2[1]);
  }
  return out;
}

ClaimResult claim1_check(const HamiltonianParams& p, const std::vector<State4>& loop, double T_ham,
                         const Tolerances& tol) {
  double spread = 0.0;
  for (const State4& z : loop) spread = std::max(spread, (z - loop.front()).norm());
  if (loop.empty() || spread < 1e-12 || !(T_ham > 0.0))
    throw Error(ErrorCode::PreconditionViolation, "Claim I needs a nonconstant periodic loop");
  ClaimResult r;
  for (const State4& z : loop) {
    const Mat4 hs = hamiltonian_eval(p, z).hessian;
    Eigen::SelfAdjointEigenSolver<Mat4> es(hs, Eigen::EigenvaluesOnly);
    r.h_sup = std::max(r.h_sup, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  r.T_ham = T_ham;
  r.product = r.h_sup * T_ham;
  r.pass = r.product >= kTwoPi - tol.claim;
  return r;
}

ClaimResult claim1_check(const HamiltonianParams& p, const std::vector<Vec2>& loop, double T_ham,
                         const Tolerances& tol) {
  double spread = 0.0;
  for (const Vec2& z : loop) spread = std::max(spread, (z - loop.front()).norm());
  if (loop.empty() || spread < 1e-12 || !(T_ham > 0.0))
    throw Error(ErrorCode::PreconditionViolation, "Claim I needs a nonconstant periodic loop");
  ClaimResult r;
  for (const Vec2& z : loop) {
    const Mat2 hs = h2_hessian(p, z[0], z[1]);
    Eigen::SelfAdjointEigenSolver<Mat2> es(hs, Eigen::EigenvaluesOnly);
    r.h_sup = std::max(r.h_sup, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  r.T_ham = T_ham;
  r.product = r.h_sup * T_ham;
  r.pass = r.product >= kTwoPi - tol.claim;
  return r;
}

std::vector<double> default_level_grid(const HamiltonianParams& p, int n_levels) {
  const SpecialOrbits so = special_orbits_unchecked(p);
  const double lo = so.c3.h2_value, hi = so.c1.h2_value;
  std::vector<double> out;
  for (int k = 1; k < n_levels; ++k) out.push_back(lo + (hi - lo) * k / n_levels);
  if (n_levels > 0) out.push_back(hi);
  return out;
}

std::vector<Vec2> level_seeds(const HamiltonianParams& p, double C) {
  const double e = p.epsilon;
  std::vector<Vec2> seeds;
  // x^4/2 + e a x^3 + e^2 c x^2 - C = 0, companion matrix of the monic quartic
  Eigen::Matrix4d comp = Eigen::Matrix4d::Zero();
  const double c3 = 2.0 * e * p.a, c2 = 2.0 * e * e * p.c, c1 = 0.0, c0 = -2.0 * C;
  comp(0, 0) = -c3;
  comp(0, 1) = -c2;
  comp(0, 2) = -c1;
  comp(0, 3) = -c0;
  comp(1, 0) = comp(2, 1) = comp(3, 2) = 1.0;
  Eigen::EigenSolver<Eigen::Matrix4d> es(comp, false);
  std::vector<double> xs;
  for (int i = 0; i < 4; ++i) {
    const std::complex<double> z = es.eigenvalues()[i];
    if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z))) continue;
    double x = z.real();
    for (int it = 0; it < 50; ++it) {
      const double f = h2(p, x, 0.0) - C, df = q_of(p, x, 0.0);
      if (df == 0.0) break;
      const double dx = f / df;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    if (std::abs(h2(p, x, 0.0) - C) > 1e-12) continue;
    bool dup = false;
    for (double q : xs) dup = dup || std::abs(q - x) < 1e-6;
    if (!dup) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  for (double x : xs) seeds.emplace_back(x, 0.0);
  // y^4/2 + e^2 d y^2 - C = 0
  const double B = e * e * p.d;
  const double disc = B * B + 2.0 * C;
  if (disc >= 0.0) {
    for (double sgn : {1.0, -1.0}) {
      const double u = -B + sgn * std::sqrt(disc);
      if (u > 0.0) {
        const double y = std::sqrt(u);
        seeds.emplace_back(0.0, y);
        seeds.emplace_back(0.0, -y);
      }
    }
  }
  return seeds;
}

ScanResult resonant_orbit_scan(const HamiltonianParams& p, double action_bound,
                               const std::vector<double>& levels, const Tolerances& tol) {
  const SpecialOrbits so = special_orbits_unchecked(p, tol);
  if (action_bound < so.P3.reeb_period - 1e-12)
    throw Error(ErrorCode::PreconditionViolation, "action_bound must be at least T3");
  ScanResult res;
  for (double C : levels) {
    const std::vector<Vec2> seeds = level_seeds(p, C);
    std::vector<bool> assigned(seeds.size(), false);
    int component = 0;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (assigned[i]) continue;
      const Vec2 s = seeds[i];
      if (h2_gradient(p, s[0], s[1]).norm() < 1e-6) {
        assigned[i] = true;
        res.excluded.push_back({C, s, "critical point (special orbit)"});
        continue;
      }
      PlanarLoop loop;
      try {
        loop = planar_period_and_area(p, C, s, tol);
      } catch (const Error& err) {
        assigned[i] = true;
        res.excluded.push_back({C, s, err.what()});
        continue;
      }
      assigned[i] = true;
      for (std::size_t j = i + 1; j < seeds.size(); ++j)
        if (!assigned[j] && polyline_distance(seeds[j], loop.samples) < 1e-3) assigned[j] = true;

      ScanLoop sl;
      sl.C = C;
      sl.component = component++;
      sl.seed = s;
      sl.tau = loop.tau;
      sl.area = loop.area;
      for (const Vec2& z : loop.samples)
        sl.level_error = std::max(sl.level_error, std::abs(h2(p, z[0], z[1]) - C));
      sl.claim = claim1_check(p, loop.samples, loop.tau, tol);
      sl.best_action = std::numeric_limits<double>::infinity();
      const double ratio = loop.tau / kTwoPi;
      for (int m2 = 1; m2 <= tol.max_m2; ++m2) {
        int m1 = static_cast<int>(std::ceil(m2 * ratio - m2 * tol.resonance));
        m1 = std::max(m1, 1);
        const double action = m1 * kPi * (1.0 - 2.0 * C) + m2 * loop.area;
        if (action < sl.best_action) {
          sl.best_action = action;
          sl.best_m1 = m1;
          sl.best_m2 = m2;
        }
      }
      sl.loop = std::move(loop);
      res.loops.push_back(std::move(sl));
      const ScanLoop& back = res.loops.back();
      if (back.best_action <= action_bound)
        res.candidates.push_back(
            {C, back.component, back.best_m1, back.best_m2, back.best_action, res.loops.size() - 1});
    }
  }
  return res;
}

double distance_to_p2(const State4& z) {
  const double r1 = std::hypot(z[0], z[1]);
  return std::sqrt((r1 - 1.0) * (r1 - 1.0) + z[2] * z[2] + z[3] * z[3]);
}

SeparatrixResult separatrix_and_homoclinics(const HamiltonianParams& p, double launch_offset,
                                            double horizon, const Tolerances& tol,
                                            bool launch_stable) {
  const Mat2 hs = h2_hessian(p, 0.0, 0.0);
  if (!(hs.determinant() < 0.0)) throw Error(ErrorCode::NotHyperbolic, "origin is not a saddle");
  // planar linearization [[-Hxy, -Hyy], [Hxx, Hxy]]
  Mat2 L;
  L << -hs(0, 1), -hs(1, 1), hs(0, 0), hs(0, 1);
  Eigen::EigenSolver<Mat2> es(L);
  SeparatrixResult out;
  int iu = es.eigenvalues()[0].real() > 0.0 ? 0 : 1;
  out.planar_rate = es.eigenvalues()[iu].real();
  out.unstable = es.eigenvectors().col(iu).real().normalized();
  out.stable = es.eigenvectors().col(1 - iu).real().normalized();
  if (out.unstable[0] < 0.0) out.unstable = -out.unstable;
  if (out.stable[0] < 0.0) out.stable = -out.stable;

  const OdeRhs rhs = planar_rhs(p);
  // The branch passes within sqrt(level error) of the saddle, so the level
  // has to be held to ~1e-15 for the return radius launch_offset to be reached.
  const double itol = std::min(tol.integrator, 1e-14);
  OdeOptions oo;
  oo.tol = itol;
  oo.min_step = tol.min_step;
  oo.abs_tol = 1e-6 * itol * launch_offset;
  const double dir = launch_stable ? -1.0 : 1.0;
  const Vec2 launch_dir = launch_stable ? out.stable : out.unstable;

  std::vector<SeparatrixBranch> branches;
  for (double sgn : {1.0, -1.0}) {
    SeparatrixBranch br;
    br.launch_vector = sgn * launch_dir;
    VecX y0(3);
    y0 << launch_offset * br.launch_vector[0], launch_offset * br.launch_vector[1], 0.0;
    double maxdist = 0.0, t_prev = 0.0, t_cross = 0.0, t_cross_prev = 0.0;
    VecX y_prev = y0, y_cross_prev;
    bool crossed = false, returned = false;
    VecX y_end;
    double t_end = 0.0;
    auto obs = [&](double t, const VecX& y, int) {
      const Vec2 z(y[0], y[1]);
      br.samples.push_back(z);
      if (!crossed && t != 0.0 && y_prev[1] * y[1] < 0.0 && y[0] > 0.05) {
        crossed = true;
        t_cross = t;
        t_cross_prev = t_prev;
        y_cross_prev = y_prev;
      }
      maxdist = std::max(maxdist, z.norm());
      t_prev = t;
      y_prev = y;
      if (maxdist > 100.0 * launch_offset && z.norm() < launch_offset) {
        returned = true;
        t_end = t;
        y_end = y;
        return false;
      }
      return true;
    };
    integrate_dopri(rhs, 0.0, y0, dir * tol.no_return_horizon, oo, {}, obs);
    if (!returned || !crossed) {
      std::ostringstream os;
      os << "separatrix branch did not return within " << tol.no_return_horizon << " time units";
      throw Error(ErrorCode::NoReturn, os.str());
    }
    const auto [tc, yc] =
        refine_event(rhs, t_cross_prev, y_cross_prev, t_cross, [](const VecX& y) { return y[1]; }, oo);
    (void)tc;
    br.axis_crossing = yc[0];
    br.enclosed_area = y_end[2];
    br.duration = std::abs(t_end);
    for (const Vec2& z : br.samples)
      br.level_error = std::max(br.level_error, std::abs(h2(p, z[0], z[1])));
    branches.push_back(std::move(br));
  }
  std::sort(branches.begin(), branches.end(),
            [](const auto& a, const auto& b) { return a.axis_crossing < b.axis_crossing; });
  out.gamma1 = std::move(branches[0]);
  out.gamma2 = std::move(branches[1]);
  out.gamma1.branch_id = "gamma1";
  out.gamma2.branch_id = "gamma2";

  for (const SeparatrixBranch* br : {&out.gamma1, &out.gamma2}) {
    const State4 zc(std::sqrt(1.0 - 2.0 * h2(p, br->axis_crossing, 0.0)), 0.0, br->axis_crossing, 0.0);
    FlowOptions fo;
    fo.tol = itol;
    const Trajectory fwd = integrate_flow(p, zc, horizon, TimeKind::reeb, fo);
    const Trajectory bwd = integrate_flow(p, zc, -horizon, TimeKind::reeb, fo);
    Trajectory tr;
    tr.time_kind = TimeKind::reeb;
    for (std::size_t i = bwd.times.size(); i-- > 1;) {
      tr.times.push_back(bwd.times[i]);
      tr.states.push_back(bwd.states[i]);
    }
    tr.times.insert(tr.times.end(), fwd.times.begin(), fwd.times.end());
    tr.states.insert(tr.states.end(), fwd.states.begin(), fwd.states.end());
    tr.energy_drift = std::max(fwd.energy_drift, bwd.energy_drift);
    out.end_distance_forward = std::max(out.end_distance_forward, distance_to_p2(fwd.states.back()));
    out.end_distance_backward = std::max(out.end_distance_backward, distance_to_p2(bwd.states.back()));
    out.homoclinic.push_back(std::move(tr));
  }
  return out;
}

}  // namespace reeb
