#include "reeb321/leaves.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "reeb321/index.hpp"
#include "reeb321/ode.hpp"
#include "reeb321/orbits.hpp"

namespace reeb {

const char* leaf_interval_name(LeafInterval w) {
  switch (w) {
    case LeafInterval::disk_to_P2: return "disk_to_P2";
    case LeafInterval::cyl_P2_P1: return "cyl_P2_P1";
    case LeafInterval::cyl_P3_P1: return "cyl_P3_P1";
    case LeafInterval::plane_to_P3: return "plane_to_P3";
  }
  return "?";
}

LeafInterval parse_leaf_interval(const std::string& s) {
  for (LeafInterval w : {LeafInterval::disk_to_P2, LeafInterval::cyl_P2_P1, LeafInterval::cyl_P3_P1,
                         LeafInterval::plane_to_P3})
    if (s == leaf_interval_name(w)) return w;
  throw Error(ErrorCode::ConfigError, "unknown leaf interval '" + s + "'");
}

const char* end_label_name(EndLabel e) {
  switch (e) {
    case EndLabel::removable: return "removable";
    case EndLabel::P1: return "P1";
    case EndLabel::P2: return "P2";
    case EndLabel::P3: return "P3";
  }
  return "?";
}

const char* section_verdict_name(SectionVerdict v) {
  switch (v) {
    case SectionVerdict::strong: return "strong";
    case SectionVerdict::fails: return "fails";
    case SectionVerdict::indefinite: return "indefinite";
  }
  return "?";
}

double profile_f2(const HamiltonianParams& p, double g) { return 1.0 - 2.0 * h2(p, g, 0.0); }

double profile_rhs(const HamiltonianParams& p, double g) {
  const double f2 = profile_f2(p, g);
  if (f2 < -1e-12) throw Error(ErrorCode::OutsideEnergyCap, "profile left the energy cap");
  const double F = std::max(f2, 0.0);
  const double Q = q_of(p, g, 0.0);
  const double den = F + Q * Q;
  if (den == 0.0) return 0.0;
  return -2.0 * kPi * F * Q / den;
}

double profile_rhs_printed(const HamiltonianParams& p, double g) {
  const double f2 = profile_f2(p, g);
  if (f2 < -1e-12) throw Error(ErrorCode::OutsideEnergyCap, "profile left the energy cap");
  const double F = std::max(f2, 0.0);
  const double Q = q_of(p, g, 0.0);
  const double h = 2.0 / (F + g * Q);
  return -h * kPi * F * Q / (1.0 + h * (Q - g) * Q);
}

namespace {

double cap_root(const HamiltonianParams& p, double lo, double hi, const Tolerances& tol) {
  auto phi = [&](double x) { return h2(p, x, 0.0) - 0.5; };
  double flo = phi(lo), fhi = phi(hi);
  if (flo * fhi > 0.0) throw Error(ErrorCode::BracketFailure, "no sign change for H2(x,0) = 1/2");
  for (int k = 0; k < 200 && hi - lo > 1e-13; ++k) {
    const double m = 0.5 * (lo + hi);
    const double fm = phi(m);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = m;
      flo = fm;
    } else {
      hi = m;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int k = 0; k < 20; ++k) {
    const double d = q_of(p, x, 0.0);
    if (d == 0.0) break;
    const double step = phi(x) / d;
    x -= step;
    if (std::abs(step) < tol.root) break;
  }
  return x;
}

OrbitLabel orbit_of(EndLabel e) {
  switch (e) {
    case EndLabel::P1: return OrbitLabel::P1;
    case EndLabel::P2: return OrbitLabel::P2;
    case EndLabel::P3: return OrbitLabel::P3;
    default: break;
  }
  throw Error(ErrorCode::PreconditionViolation, "removable end has no orbit");
}

}  // namespace

XbarRoots solve_xbar(const HamiltonianParams& p, const Tolerances& tol) {
  const SpecialOrbits so = special_orbits_unchecked(p, tol);
  XbarRoots r;
  r.plus = cap_root(p, so.c3.location[0], 2.0, tol);
  r.minus = cap_root(p, -2.0, 0.0, tol);
  return r;
}

IntervalData interval_data(const HamiltonianParams& p, LeafInterval which, const Tolerances& tol) {
  const SpecialOrbits so = special_orbits_unchecked(p, tol);
  const double p1 = so.c1.location[0], p2 = so.c2.location[0], p3 = so.c3.location[0];
  IntervalData d;
  d.which = which;
  switch (which) {
    case LeafInterval::disk_to_P2: {
      const XbarRoots xb = solve_xbar(p, tol);
      d.lo = xb.minus;
      d.hi = p2;
      d.role = "D";
      break;
    }
    case LeafInterval::cyl_P2_P1:
      d.lo = p2;
      d.hi = p1;
      d.role = "V";
      break;
    case LeafInterval::cyl_P3_P1:
      d.lo = p1;
      d.hi = p3;
      d.role = "C_tau";
      break;
    case LeafInterval::plane_to_P3: {
      const XbarRoots xb = solve_xbar(p, tol);
      d.lo = p3;
      d.hi = xb.plus;
      d.role = "F_tau";
      break;
    }
  }
  if (d.hi - d.lo <= 10.0 * tol.root) throw Error(ErrorCode::PreconditionViolation, "interval endpoints too close");
  auto label = [&](double x) {
    if (std::abs(x - p1) < 1e-9) return EndLabel::P1;
    if (std::abs(x - p2) < 1e-9) return EndLabel::P2;
    if (std::abs(x - p3) < 1e-9) return EndLabel::P3;
    return EndLabel::removable;
  };
  // g increases when the rhs is positive in the interior
  const bool increasing = profile_rhs(p, 0.5 * (d.lo + d.hi)) > 0.0;
  d.g_neg = increasing ? d.lo : d.hi;
  d.g_pos = increasing ? d.hi : d.lo;
  d.neg = label(d.g_neg);
  d.pos = label(d.g_pos);
  return d;
}

LeafProfile integrate_profile(const HamiltonianParams& p, LeafInterval which, const Tolerances& tol, double ds) {
  LeafProfile prof;
  prof.interval = interval_data(p, which, tol);
  prof.uniform = ds > 0.0;
  prof.ds = ds;
  const double g0 = 0.5 * (prof.interval.lo + prof.interval.hi);

  const OdeRhs rhs = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.resize(2);
    dy[0] = profile_rhs(p, y[0]);
    dy[1] = kPi * std::max(profile_f2(p, y[0]), 0.0);
  };
  OdeOptions opt;
  opt.tol = tol.integrator;
  opt.abs_tol = 1e-3 * tol.endpoint_stop;
  opt.min_step = tol.min_step;
  opt.max_steps = tol.max_steps;
  if (prof.uniform) opt.max_step = ds;

  struct Node {
    double s, g, a;
  };
  auto run = [&](double dir, double target, std::vector<Node>& out) {
    std::vector<double> stops;
    if (prof.uniform) {
      const long m = static_cast<long>(std::floor(tol.s_span / ds));
      for (long k = 1; k <= m; ++k) stops.push_back(dir * k * ds);
    }
    const OdeObserver obs = [&](double s, const Eigen::VectorXd& y, int stop_index) {
      if (s == 0.0) return true;
      if (prof.uniform && stop_index < 0) return true;
      out.push_back({s, y[0], y[1]});
      return std::abs(y[0] - target) >= tol.endpoint_stop;
    };
    Eigen::VectorXd y0(2);
    y0 << g0, 0.0;
    integrate_dopri(rhs, 0.0, y0, dir * tol.s_span, opt, stops, obs);
    const double gap = out.empty() ? std::abs(g0 - target) : std::abs(out.back().g - target);
    if (gap > tol.asym) {
      std::ostringstream os;
      os << leaf_interval_name(which) << ": |g - limit| = " << gap << " at |s| = " << tol.s_span;
      throw Error(ErrorCode::SlowConvergence, os.str());
    }
    return gap;
  };
  std::vector<Node> fwd, bwd;
  prof.pos_gap = run(1.0, prof.interval.g_pos, fwd);
  prof.neg_gap = run(-1.0, prof.interval.g_neg, bwd);

  std::vector<Node> all(bwd.rbegin(), bwd.rend());
  all.push_back({0.0, g0, 0.0});
  all.insert(all.end(), fwd.begin(), fwd.end());
  for (const Node& n : all) {
    prof.s.push_back(n.s);
    prof.g.push_back(n.g);
    prof.f.push_back(std::sqrt(std::max(profile_f2(p, n.g), 0.0)));
    prof.a.push_back(n.a);
  }
  return prof;
}

LeafMap assemble_leaf(const HamiltonianParams& p, const LeafProfile& profile, int n_t) {
  if (n_t < 64) throw Error(ErrorCode::PreconditionViolation, "n_t must be >= 64");
  LeafMap m;
  m.profile = profile;
  m.n_t = n_t;
  m.u.reserve(profile.size() * n_t);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    for (int j = 0; j < n_t; ++j) {
      const double th = kTwoPi * j / n_t;
      const State4 z(profile.f[i] * std::cos(th), profile.f[i] * std::sin(th), profile.g[i], 0.0);
      m.level_error = std::max(m.level_error, std::abs(energy(p, z) - 0.5));
      m.u.push_back(z);
    }
  }
  return m;
}

namespace {

// Exact u_s at (g, t) on the leaf: f' = -Q g' / f.
Vec4 leaf_us(const HamiltonianParams& p, double g, double t) {
  const double f = std::sqrt(std::max(profile_f2(p, g), 0.0));
  const double gp = profile_rhs(p, g);
  const double fp = f > 0.0 ? -q_of(p, g, 0.0) * gp / f : 0.0;
  return Vec4(fp * std::cos(kTwoPi * t), fp * std::sin(kTwoPi * t), gp, 0.0);
}

State4 leaf_point(const HamiltonianParams& p, double g, double t) {
  const double f = std::sqrt(std::max(profile_f2(p, g), 0.0));
  return State4(f * std::cos(kTwoPi * t), f * std::sin(kTwoPi * t), g, 0.0);
}

int end_winding(const HamiltonianParams& p, double g, int n_t, const Tolerances& tol) {
  std::vector<Vec2> c;
  for (int j = 0; j < n_t; ++j) {
    const double t = static_cast<double>(j) / n_t;
    const ContactFrame fr = contact_frame(p, leaf_point(p, g, t), tol.frame);
    const Vec2 v = fr.coords(fr.project(leaf_us(p, g, t)));
    if (v.norm() < tol.wind_floor) throw Error(ErrorCode::UnreliableWinding, "projected u_s below the floor");
    c.push_back(v);
  }
  double total = 0.0;
  for (int j = 0; j < n_t; ++j) {
    const Vec2& a = c[j];
    const Vec2& b = c[(j + 1) % n_t];
    const double d = std::atan2(a[0] * b[1] - a[1] * b[0], a.dot(b));
    if (std::abs(d) >= 0.5 * kPi) throw Error(ErrorCode::UnreliableWinding, "t-grid too coarse for winding");
    total += d;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace

SectionCheck section_pairing_check(const HamiltonianParams& p, const ReebOrbit& orbit, const Section& eta,
                                   int n_nodes, const Tolerances& tol) {
  SectionCheck r;
  int npos = 0, nneg = 0;
  double maxabs = 0.0;
  r.margin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n_nodes; ++j) {
    const double t = static_cast<double>(j) / n_nodes;
    const Vec4 e = eta(t);
    const Vec4 L = lie_derivative_along_orbit(p, orbit, eta, t, tol.lie_step, std::min(tol.integrator, 1e-12));
    const double w = dlambda(e, L);
    r.pairing.push_back(w);
    r.margin = std::min(r.margin, std::abs(w));
    maxabs = std::max(maxabs, std::abs(w));
    if (w > tol.pairing) ++npos;
    if (w < -tol.pairing) ++nneg;
  }
  if (npos == n_nodes) {
    r.verdict = SectionVerdict::strong;
    r.sign = 1;
  } else if (nneg == n_nodes) {
    r.verdict = SectionVerdict::strong;
    r.sign = -1;
  } else if (npos > 0 && nneg > 0) {
    r.verdict = SectionVerdict::fails;
  } else {
    r.verdict = SectionVerdict::indefinite;
  }
  return r;
}

SectionCheck strong_section_check(const HamiltonianParams& p, const LeafMap& leaf, LeafEnd end,
                                  const Tolerances& tol, int n_nodes) {
  const LeafProfile& pr = leaf.profile;
  const EndLabel label = end == LeafEnd::pos ? pr.interval.pos : pr.interval.neg;
  if (label == EndLabel::removable)
    throw Error(ErrorCode::PreconditionViolation, "strong section check needs an orbit end");
  const SpecialOrbits so = special_orbits_unchecked(p, tol);
  const ReebOrbit& orbit = so.orbit(orbit_of(label));
  const double g = end == LeafEnd::pos ? pr.g.back() : pr.g.front();
  const Section eta = [&](double t) -> Vec4 {
    const ContactFrame near = contact_frame(p, leaf_point(p, g, t), tol.frame);
    const Vec2 c = near.coords(near.project(leaf_us(p, g, t)));
    if (c.norm() < tol.wind_floor) throw Error(ErrorCode::VanishingSection, "projected u_s vanishes");
    const Vec2 cn = c.normalized();
    const State4 base(orbit.r * std::cos(kTwoPi * t), orbit.r * std::sin(kTwoPi * t), orbit.z2_datum[0],
                      orbit.z2_datum[1]);
    const ContactFrame on = contact_frame(p, base, tol.frame);
    return cn[0] * on.Xbar1 + cn[1] * on.Xbar2;
  };
  return section_pairing_check(p, orbit, eta, n_nodes, tol);
}

LeafDiagnostics leaf_diagnostics(const HamiltonianParams& p, const LeafMap& leaf, const Tolerances& tol) {
  const LeafProfile& pr = leaf.profile;
  const std::size_t m = pr.size();
  const int nt = leaf.n_t;
  if (m < 3) throw Error(ErrorCode::PreconditionViolation, "profile too short");
  LeafDiagnostics d;
  d.level_error = leaf.level_error;
  d.transversality_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double h1 = pr.s[i] - pr.s[i - 1], h2s = pr.s[i + 1] - pr.s[i];
    const double cm = -h2s / (h1 * (h1 + h2s)), c0 = (h2s - h1) / (h1 * h2s), cp = h1 / (h2s * (h1 + h2s));
    const double a_s = cm * pr.a[i - 1] + c0 * pr.a[i] + cp * pr.a[i + 1];
    for (int j = 0; j < nt; ++j) {
      const State4& z = leaf.at(i, j);
      const Vec4 us = cm * leaf.at(i - 1, j) + c0 * z + cp * leaf.at(i + 1, j);
      const Vec4 ut = (leaf.at(i, (j + 1) % nt) - leaf.at(i, (j + nt - 1) % nt)) * (0.5 * nt);
      const ContactFrame fr = contact_frame(p, z, tol.frame);
      const Vec4 pus = fr.project(us), put = fr.project(ut);
      const double res = (pus + fr.apply_J(put)).norm() + std::abs(a_s - liouville(z, ut)) +
                         std::abs(liouville(z, us));
      d.cr_residual_max = std::max(d.cr_residual_max, res);
      d.transversality_min = std::min(d.transversality_min, pus.norm() + put.norm());
    }
  }
  d.hofer_energy = kPi * pr.f.back() * pr.f.back();
  d.mass_neg_end = kPi * pr.f.front() * pr.f.front();
  d.dlambda_area = d.hofer_energy - d.mass_neg_end;

  d.g_monotone = true;
  d.a_increasing = true;
  const double dir = pr.g.back() > pr.g.front() ? 1.0 : -1.0;
  for (std::size_t i = 1; i < m; ++i) {
    if (!(dir * (pr.g[i] - pr.g[i - 1]) > 0.0)) d.g_monotone = false;
    if (!(pr.a[i] > pr.a[i - 1])) d.a_increasing = false;
  }

  const SpecialOrbits so = special_orbits_unchecked(p, tol);
  auto hausdorff = [&](EndLabel e, double g, double f) {
    const ReebOrbit& o = so.orbit(orbit_of(e));
    return std::hypot(f - o.r, g - o.z2_datum[0]);
  };
  d.wind_infty_pos = end_winding(p, pr.g.back(), nt, tol);
  d.hausdorff_pos = hausdorff(pr.interval.pos, pr.g.back(), pr.f.back());
  if (pr.interval.neg != EndLabel::removable) {
    d.wind_infty_neg = end_winding(p, pr.g.front(), nt, tol);
    d.hausdorff_neg = hausdorff(pr.interval.neg, pr.g.front(), pr.f.front());
  }
  const SectionCheck sc = strong_section_check(p, leaf, LeafEnd::pos, tol);
  d.section_verdict = sc.verdict;
  d.section_pairing_sign = sc.sign;
  return d;
}

FoliationAtlas foliation_atlas(const HamiltonianParams& p, const Tolerances& tol, double ds, int n_t) {
  FoliationAtlas atlas;
  const SpecialOrbits so = special_orbits(p, tol);
  atlas.binding = {so.P1, so.P2, so.P3};
  atlas.binding_points = {so.c1.location, so.c2.location, so.c3.location};
  atlas.xbar = solve_xbar(p, tol);

  std::map<EndLabel, int> mu;
  for (EndLabel e : {EndLabel::P1, EndLabel::P2, EndLabel::P3}) {
    const ReebOrbit& o = so.orbit(orbit_of(e));
    const SymplecticPath path = restrict_linearized_to_xi(p, o, FrameKind::rho_orbit_frame, 256, tol);
    mu[e] = cz_index(path, special_frame_correction(p, o, 256, tol), tol).mu_global;
  }

  for (LeafInterval w : {LeafInterval::disk_to_P2, LeafInterval::cyl_P2_P1, LeafInterval::cyl_P3_P1,
                         LeafInterval::plane_to_P3}) {
    AtlasLeaf L;
    L.which = w;
    L.leaf = assemble_leaf(p, integrate_profile(p, w, tol, ds), n_t);
    L.role = L.leaf.profile.interval.role;
    L.diagnostics = leaf_diagnostics(p, L.leaf, tol);
    const IntervalData& iv = L.leaf.profile.interval;
    FredholmData& fd = L.fredholm;
    fd.mu_pos = mu[iv.pos];
    fd.mu_neg = iv.neg == EndLabel::removable ? 0 : mu[iv.neg];
    fd.euler = 2;
    fd.punctures = iv.neg == EndLabel::removable ? 1 : 2;
    fd.index = fd.mu_pos - fd.mu_neg - fd.euler + fd.punctures;
    fd.wind_infty = L.diagnostics.wind_infty_pos - L.diagnostics.wind_infty_neg.value_or(0);
    fd.wind_pi = fd.wind_infty - fd.euler + fd.punctures;
    atlas.leaves.push_back(std::move(L));
  }

  const SeparatrixResult sep = separatrix_and_homoclinics(p, tol.launch_offset, 50.0, tol);
  atlas.separatrix = {sep.gamma1.samples, sep.gamma2.samples};
  atlas.not_constructed = {"U1", "U2"};
  return atlas;
}

}  // namespace reeb
