#include "reeb321/index.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace reeb {

const char* cz_method_name(CZMethod m) {
  switch (m) {
    case CZMethod::winding_interval: return "winding_interval";
    case CZMethod::analytic_oracle: return "analytic_oracle";
    case CZMethod::spectral: return "spectral";
  }
  return "?";
}

const char* quadrant_name(Quadrant q) {
  switch (q) {
    case Quadrant::I: return "I";
    case Quadrant::II: return "II";
    case Quadrant::III: return "III";
    case Quadrant::IV: return "IV";
  }
  return "?";
}

const char* pairing_sign_name(PairingSign s) {
  switch (s) {
    case PairingSign::positive: return "+";
    case PairingSign::negative: return "-";
    case PairingSign::mixed: return "mixed";
  }
  return "?";
}

namespace {

double angle_step(const Vec2& a, const Vec2& b) {
  return std::atan2(a[0] * b[1] - a[1] * b[0], a.dot(b));
}

double delta_at(const SymplecticPath& path, double phi) {
  return winding_number(path, Vec2(std::cos(phi), std::sin(phi)));
}

// Golden-section search for a minimum of f on [a, b].
template <class F>
double golden_min(F f, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::min(fc, fd);
}

double dist_to_integer(double x) { return std::abs(x - std::round(x)); }

}  // namespace

double winding_number(const SymplecticPath& path, const Vec2& z0) {
  if (path.size() < 2) throw Error(ErrorCode::PreconditionViolation, "path needs nodes");
  double total = 0.0;
  Vec2 prev = path.matrices.front() * z0;
  for (std::size_t j = 1; j < path.size(); ++j) {
    const Vec2 cur = path.matrices[j] * z0;
    const double d = angle_step(prev, cur);
    if (std::abs(d) > 0.5 * kPi) {
      std::ostringstream os;
      os << "angle increment " << d << " at node " << j;
      throw Error(ErrorCode::SamplingTooCoarse, os.str());
    }
    total += d;
    prev = cur;
  }
  return total / kTwoPi;
}

WindingInterval winding_interval_unchecked(const SymplecticPath& path, int n_directions) {
  if (n_directions < 128) throw Error(ErrorCode::PreconditionViolation, "n_directions must be >= 128");
  std::vector<double> vals(n_directions);
  for (int i = 0; i < n_directions; ++i) vals[i] = delta_at(path, kPi * i / n_directions);
  const int imin = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  const int imax = static_cast<int>(std::max_element(vals.begin(), vals.end()) - vals.begin());
  const double h = kPi / n_directions;
  WindingInterval w;
  w.lo = std::min(vals[imin],
                  golden_min([&](double phi) { return delta_at(path, phi); }, h * (imin - 1), h * (imin + 1)));
  w.hi = std::max(vals[imax], -golden_min([&](double phi) { return -delta_at(path, phi); },
                                          h * (imax - 1), h * (imax + 1)));
  w.contains_integer = std::floor(w.hi) >= std::ceil(w.lo);
  w.degenerate_margin = std::min(dist_to_integer(w.lo), dist_to_integer(w.hi));
  return w;
}

WindingInterval winding_interval(const SymplecticPath& path, int n_directions, double degen_tol) {
  const WindingInterval w = winding_interval_unchecked(path, n_directions);
  if (w.degenerate_margin < degen_tol) {
    std::ostringstream os;
    os << "winding interval [" << w.lo << ", " << w.hi << "] touches an integer";
    throw Error(ErrorCode::DegenerateOrbit, os.str());
  }
  return w;
}

int cz_from_interval(const WindingInterval& w) {
  if (w.contains_integer) return 2 * static_cast<int>(std::ceil(w.lo));
  return 2 * static_cast<int>(std::floor(w.lo)) + 1;
}

CZResult cz_index(const SymplecticPath& path, int frame_correction, const Tolerances& tol,
                  CZMethod method) {
  const WindingInterval w = winding_interval(path, tol.n_directions, tol.degen);
  CZResult r;
  r.method = method;
  r.mu_local = cz_from_interval(w);
  r.frame_correction = frame_correction;
  r.mu_global = r.mu_local + 2 * frame_correction;
  return r;
}

int trivialization_winding(const FrameSamples& frame_a, const FrameSamples& frame_b) {
  if (frame_a.size() != frame_b.size() || frame_a.size() < 3)
    throw Error(ErrorCode::PreconditionViolation, "frames must be sampled at the same nodes");
  std::vector<Vec2> c(frame_a.size());
  for (std::size_t j = 0; j < frame_a.size(); ++j) {
    const auto& [b1, b2] = frame_b[j];
    const double w = dlambda(b1, b2);
    if (std::abs(w) < 1e-12) throw Error(ErrorCode::DegenerateFrame, "frame B degenerate");
    if (std::abs(dlambda(frame_a[j].first, frame_a[j].second)) < 1e-12)
      throw Error(ErrorCode::DegenerateFrame, "frame A degenerate");
    const Vec4& v = frame_a[j].first;
    c[j] = Vec2(dlambda(v, b2) / w, dlambda(b1, v) / w);
  }
  double total = 0.0;
  for (std::size_t j = 1; j < c.size(); ++j) total += angle_step(c[j - 1], c[j]);
  const double turns = total / kTwoPi;
  const double k = std::round(turns);
  if (std::abs(turns - k) >= 0.1) {
    std::ostringstream os;
    os << "frame winding " << turns << " is not near an integer";
    throw Error(ErrorCode::RoundingUnsafe, os.str());
  }
  return static_cast<int>(k);
}

int special_frame_correction(const HamiltonianParams& p, const ReebOrbit& orbit, int n,
                             const Tolerances& tol) {
  FrameSamples a, b;
  for (const State4& z : special_orbit_loop(orbit, n)) {
    a.push_back(rho_frame(p, z, tol.frame));
    const ContactFrame f = contact_frame(p, z, tol.frame);
    b.emplace_back(f.Xbar1, f.Xbar2);
  }
  return trivialization_winding(a, b);
}

Mat2 exp_offdiag(double k1, double k2, double s) {
  const double prod = k1 * k2;
  Mat2 m;
  if (prod > 0.0) {
    const double w = std::sqrt(prod);
    const double ch = std::cosh(w * s), sh = std::sinh(w * s);
    m << ch, k1 / w * sh, k2 / w * sh, ch;
  } else if (prod < 0.0) {
    const double w = std::sqrt(-prod);
    const double cs = std::cos(w * s), sn = std::sin(w * s);
    m << cs, k1 / w * sn, k2 / w * sn, cs;
  } else {
    m << 1.0, k1 * s, k2 * s, 1.0;
  }
  return m;
}

SymplecticPath analytic_monodromy_oracle(const HamiltonianParams& p, OrbitLabel which, int n_samples) {
  const SpecialOrbits so = special_orbits_unchecked(p);
  const CriticalPoint& cp = so.point(which);
  const ReebOrbit& orbit = so.orbit(which);
  const double T = orbit.reeb_period;
  SymplecticPath path;
  path.frame_kind = FrameKind::rho_orbit_frame;
  path.orbit = orbit;
  Mat2 A;
  A << 0.0, T * cp.k1, T * cp.k2, 0.0;
  path.generator = A;
  for (int j = 0; j <= n_samples; ++j) {
    const double tau = static_cast<double>(j) / n_samples;
    path.grid.push_back(tau);
    path.matrices.push_back(j == 0 ? Mat2::Identity() : exp_offdiag(cp.k1, cp.k2, T * tau));
  }
  return path;
}

SymplecticPath iterate_path(const SymplecticPath& path, int k) {
  if (k < 1) throw Error(ErrorCode::PreconditionViolation, "iterate must be positive");
  const std::size_t n = path.size() - 1;
  SymplecticPath out;
  out.frame_kind = path.frame_kind;
  out.orbit = path.orbit;
  if (out.orbit) out.orbit->multiplicity *= k;
  if (path.generator) out.generator = k * *path.generator;
  const Mat2 one = path.matrices.back();
  Mat2 power = Mat2::Identity();
  for (int j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      out.grid.push_back((j + path.grid[i]) / k);
      out.matrices.push_back(path.matrices[i] * power);
    }
    power = one * power;
  }
  out.grid.push_back(1.0);
  out.matrices.push_back(power);
  out.matrices.front() = Mat2::Identity();
  return out;
}

SymplecticPath iterate_path_resampled(const SymplecticPath& path, int k) {
  if (k < 1) throw Error(ErrorCode::PreconditionViolation, "iterate must be positive");
  const std::size_t n = path.size() - 1;
  SymplecticPath out;
  out.frame_kind = path.frame_kind;
  out.orbit = path.orbit;
  if (out.orbit) out.orbit->multiplicity *= k;
  if (path.generator) out.generator = k * *path.generator;
  std::vector<Mat2> powers(k + 1, Mat2::Identity());
  for (int j = 1; j <= k; ++j) powers[j] = path.matrices.back() * powers[j - 1];
  for (std::size_t j = 0; j <= n; ++j) {
    const std::size_t kj = k * j;
    out.grid.push_back(static_cast<double>(j) / n);
    out.matrices.push_back(path.matrices[kj % n] * powers[kj / n]);
  }
  out.matrices.front() = Mat2::Identity();
  return out;
}

CZResult iterate_index(const SymplecticPath& path, int k, int frame_correction, const Tolerances& tol) {
  CZResult r = cz_index(iterate_path(path, k), k * frame_correction, tol);
  return r;
}

Quadrant classify_quadrant(const Vec4& eta, const Vec4& v_minus, const Vec4& v_plus) {
  const double w = dlambda(v_minus, v_plus);
  const double a = dlambda(eta, v_plus) / w;
  const double b = dlambda(v_minus, eta) / w;
  if (a >= 0.0 && b >= 0.0) return Quadrant::I;
  if (a < 0.0 && b >= 0.0) return Quadrant::II;
  if (a < 0.0 && b < 0.0) return Quadrant::III;
  return Quadrant::IV;
}

EigenFrame eigenframe(const HamiltonianParams& p, const ReebOrbit& orbit, int n_nodes,
                      const Tolerances& tol) {
  const SymplecticPath path = restrict_linearized_to_xi(p, orbit, FrameKind::global_frame, n_nodes, tol);
  const Mat2 M = path.matrices.back();
  const double tr = M.trace(), det = M.determinant();
  const double disc = 0.25 * tr * tr - det;
  if (!(disc > 0.0) || std::abs(tr) <= 2.0 + tol.eig)
    throw Error(ErrorCode::NotHyperbolic, "linearized return map is not hyperbolic");
  const double root = std::sqrt(disc);
  const double l_big = tr > 0.0 ? 0.5 * tr + root : 0.5 * tr - root;
  const double l_small = det / l_big;
  auto eigvec = [&](double l) {
    const Vec2 u(M(0, 1), l - M(0, 0)), v(l - M(1, 1), M(1, 0));
    return (u.norm() > v.norm() ? u : v).normalized();
  };
  const Vec2 cm = eigvec(l_big), cp = eigvec(l_small);
  EigenFrame ef;
  ef.orbit = orbit;
  ef.multiplier_beta = std::abs(l_big);
  ef.eig_residual = std::max((M * cm - l_big * cm).norm() / std::abs(l_big),
                             (M * cp - l_small * cp).norm() / std::abs(l_small));
  const ContactFrame f0 = contact_frame(p, path.base_points.front(), tol.frame);
  const Vec4 vm0 = cm[0] * f0.Xbar1 + cm[1] * f0.Xbar2;
  Vec4 vp0 = cp[0] * f0.Xbar1 + cp[1] * f0.Xbar2;
  if (dlambda(vm0, vp0) < 0.0) vp0 = -vp0;
  for (std::size_t j = 0; j < path.size(); ++j) {
    const ContactFrame f = contact_frame(p, path.base_points[j], tol.frame);
    ef.grid.push_back(path.grid[j]);
    ef.base.push_back(path.base_points[j]);
    ef.v_minus.push_back(f.project(path.fundamental[j] * vm0));
    ef.v_plus.push_back(f.project(path.fundamental[j] * vp0));
  }
  return ef;
}

QuadrantReport eigenframe_and_quadrants(const HamiltonianParams& p, const ReebOrbit& orbit,
                                        const Section& section, int n_nodes, const Tolerances& tol) {
  QuadrantReport rep;
  rep.frame = eigenframe(p, orbit, n_nodes, tol);
  const std::size_t n = rep.frame.grid.size() - 1;  // last node repeats the first
  double max_eta = 0.0, max_pair = 0.0;
  bool all_pos = true, all_neg = true;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = rep.frame.grid[j];
    const Vec4 eta = section(t);
    if (eta.norm() < 1e-12) throw Error(ErrorCode::VanishingSection, "section vanishes at a node");
    if (dlambda(rep.frame.v_minus[j], rep.frame.v_plus[j]) <= 0.0)
      throw Error(ErrorCode::DegenerateFrame, "eigenframe lost positivity");
    rep.quadrants.push_back(classify_quadrant(eta, rep.frame.v_minus[j], rep.frame.v_plus[j]));
    const Vec4 lie = lie_derivative_along_orbit(p, orbit, section, t, tol.lie_step);
    const double pr = dlambda(eta, lie);
    rep.pairing.push_back(pr);
    max_eta = std::max(max_eta, eta.squaredNorm());
    max_pair = std::max(max_pair, std::abs(pr));
    all_pos = all_pos && pr > tol.pairing;
    all_neg = all_neg && pr < -tol.pairing;
  }
  rep.pairing_sign = all_pos ? PairingSign::positive : all_neg ? PairingSign::negative : PairingSign::mixed;
  rep.near_zero_pairing = max_pair < 1e-4 * max_eta;
  if (rep.near_zero_pairing) rep.pairing_sign = PairingSign::mixed;
  return rep;
}

}  // namespace reeb

namespace reeb {

Section rho_test_section(const HamiltonianParams& p, const ReebOrbit& orbit, double phi0, double amp,
                         double frame_tol) {
  return [p, orbit, phi0, amp, frame_tol](double t) -> Vec4 {
    const double th = kTwoPi * orbit.multiplicity * t;
    const State4 z(orbit.r * std::cos(th), orbit.r * std::sin(th), orbit.z2_datum[0], orbit.z2_datum[1]);
    const auto [e1, e2] = rho_frame(p, z, frame_tol);
    const double phi = phi0 + amp * std::sin(kTwoPi * t);
    return std::cos(phi) * e1 + std::sin(phi) * e2;
  };
}

}  // namespace reeb
