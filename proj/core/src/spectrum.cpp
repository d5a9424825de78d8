#include "reeb321/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "reeb321/jacobi.hpp"

namespace reeb {

OperatorModel build_S(const SymplecticPath& path, const Tolerances& tol) {
  if (path.size() < 5) throw Error(ErrorCode::PreconditionViolation, "path too short");
  const int n = static_cast<int>(path.size()) - 1;
  OperatorModel m;
  m.orbit = path.orbit;
  m.frame_kind = path.frame_kind;
  m.n_nodes = n;
  for (const Mat2& phi : path.matrices)
    if (std::abs(phi.determinant() - 1.0) > tol.path)
      throw Error(ErrorCode::PreconditionViolation, "path is not symplectic");
  if (path.generator) {
    Mat2 S = -j0() * *path.generator;
    m.asymmetry = (S - S.transpose()).cwiseAbs().maxCoeff();
    S = Mat2(0.5 * (S + S.transpose()));
    m.S.assign(n, S);
    m.constant = true;
  } else {
    const Mat2 one = path.matrices.back();
    const Mat2 one_inv = one.inverse();
    auto phi = [&](int k) -> Mat2 {
      if (k < 0) return path.matrices[k + n] * one_inv;
      if (k > n) return path.matrices[k - n] * one;
      return path.matrices[k];
    };
    const double h = 1.0 / n;
    m.S.resize(n);
    for (int j = 0; j < n; ++j) {
      const Mat2 d = (-phi(j + 2) + 8.0 * phi(j + 1) - 8.0 * phi(j - 1) + phi(j - 2)) / (12.0 * h);
      Mat2 S = -j0() * d * phi(j).inverse();
      m.asymmetry = std::max(m.asymmetry, (S - S.transpose()).cwiseAbs().maxCoeff());
      S = Mat2(0.5 * (S + S.transpose()));
      m.fd_residual = std::max(m.fd_residual, (d - j0() * S * phi(j)).cwiseAbs().maxCoeff());
      m.S[j] = S;
    }
  }
  if (m.asymmetry > tol.asymmetry) {
    std::ostringstream os;
    os << "S asymmetry " << m.asymmetry;
    throw Error(ErrorCode::AsymmetryTooLarge, os.str());
  }
  return m;
}

OperatorModel constant_operator(const Mat2& S, int n_nodes) {
  OperatorModel m;
  m.n_nodes = n_nodes;
  m.S.assign(n_nodes, 0.5 * (S + S.transpose()));
  m.constant = true;
  return m;
}

Eigen::MatrixXd operator_matrix(const OperatorModel& model) {
  const int n = model.n_nodes;
  const double h = 1.0 / n;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  const Mat2 mj = -j0();
  const int offs[4] = {1, -1, 2, -2};
  const double coef[4] = {8.0 / (12.0 * h), -8.0 / (12.0 * h), -1.0 / (12.0 * h), 1.0 / (12.0 * h)};
  for (int j = 0; j < n; ++j) {
    M.block<2, 2>(2 * j, 2 * j) -= model.S[j];
    for (int k = 0; k < 4; ++k) {
      const int c = ((j + offs[k]) % n + n) % n;
      M.block<2, 2>(2 * j, 2 * c) += coef[k] * mj;
    }
  }
  return M;
}

namespace {

struct WindingProbe {
  bool trusted = false;
  int winding = 0;
};

WindingProbe probe_winding(const Eigen::VectorXd& v, int n) {
  WindingProbe w;
  double vmax = 0.0;
  for (int j = 0; j < n; ++j) vmax = std::max(vmax, std::hypot(v[2 * j], v[2 * j + 1]));
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    const int k = (j + 1) % n;
    const Vec2 a(v[2 * j], v[2 * j + 1]), b(v[2 * k], v[2 * k + 1]);
    if (a.norm() < 1e-8 * vmax) return w;
    const double d = std::atan2(a[0] * b[1] - a[1] * b[0], a.dot(b));
    if (std::abs(d) >= 0.5 * kPi) return w;
    total += d;
  }
  const double turns = total / kTwoPi;
  w.winding = static_cast<int>(std::lround(turns));
  w.trusted = std::abs(turns - w.winding) < 1e-6;
  return w;
}

}  // namespace

SpectrumReport discretize_and_solve(const OperatorModel& model, int n_nodes, const Tolerances& tol) {
  if (n_nodes < 128 || n_nodes % 2 != 0)
    throw Error(ErrorCode::PreconditionViolation, "n_nodes must be even and >= 128");
  OperatorModel m = model;
  if (m.n_nodes != n_nodes) {
    if (!m.constant) throw Error(ErrorCode::PreconditionViolation, "model sampled at a different node count");
    m.S.assign(n_nodes, model.S.front());
    m.n_nodes = n_nodes;
  }
  const Eigen::MatrixXd M = operator_matrix(m);
  const SymmetricEigen es = jacobi_eigen(M, tol.jacobi);
  SpectrumReport r;
  r.n_nodes = n_nodes;
  r.gap = es.values.cwiseAbs().minCoeff();
  r.all_eigenvalues.assign(es.values.data(), es.values.data() + es.values.size());
  for (int k = 0; k < es.values.size(); ++k) {
    const WindingProbe w = probe_winding(es.vectors.col(k), n_nodes);
    if (!w.trusted) {
      ++r.excluded;
      continue;
    }
    r.eigenvalues.push_back(es.values[k]);
    r.windings.push_back(w.winding);
    r.eigenvectors.push_back(es.vectors.col(k));
  }
  int ineg = -1, ipos = -1;
  for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) {
    if (r.eigenvalues[k] < 0.0) ineg = static_cast<int>(k);
    else if (ipos < 0) ipos = static_cast<int>(k);
  }
  if (ineg >= 0 && ipos >= 0) {
    r.nu_neg = r.eigenvalues[ineg];
    r.nu_pos = r.eigenvalues[ipos];
    r.wind_neg = r.windings[ineg];
    r.wind_pos = r.windings[ipos];
    r.p = r.wind_pos - r.wind_neg;
    r.mu_tilde = 2 * r.wind_neg + r.p;
    r.resolved = r.p == 0 || r.p == 1;
  }
  return r;
}

CZResult generalized_cz(const SpectrumReport& report, int frame_correction) {
  if (!report.resolved) throw Error(ErrorCode::BandTooNarrow, "nu_neg / nu_pos not resolved");
  CZResult r;
  r.method = CZMethod::spectral;
  r.mu_local = report.mu_tilde;
  r.frame_correction = frame_correction;
  r.mu_global = r.mu_local + 2 * frame_correction;
  return r;
}

SpectrumAudit spectrum_property_audit(const SpectrumReport& report, int band) {
  std::map<int, std::vector<std::size_t>> by_winding;
  for (std::size_t k = 0; k < report.windings.size(); ++k) by_winding[report.windings[k]].push_back(k);
  for (int w = -band; w <= band; ++w)
    if (!by_winding.count(w)) throw Error(ErrorCode::BandTooNarrow, "trusted band misses a winding");

  SpectrumAudit a;
  for (std::size_t k = 1; k < report.windings.size(); ++k) {
    if (report.windings[k] < report.windings[k - 1]) {
      a.monotone = false;
      std::ostringstream os;
      os << "winding decreases at eigenvalue " << report.eigenvalues[k];
      a.violations.push_back(os.str());
    }
  }
  a.min_det = std::numeric_limits<double>::infinity();
  const int n = report.n_nodes;
  for (int w = -band; w <= band; ++w) {
    const auto& idx = by_winding[w];
    if (idx.size() != 2) {
      a.pairs = false;
      std::ostringstream os;
      os << "winding " << w << " has " << idx.size() << " eigenvalues";
      a.violations.push_back(os.str());
      continue;
    }
    const double l1 = report.eigenvalues[idx[0]], l2 = report.eigenvalues[idx[1]];
    if (std::abs(l1 - l2) < 1e-9 * std::max(1.0, std::abs(l1))) continue;
    const Eigen::VectorXd& v1 = report.eigenvectors[idx[0]];
    const Eigen::VectorXd& v2 = report.eigenvectors[idx[1]];
    double dmin = std::numeric_limits<double>::infinity(), dmax = -dmin;
    for (int j = 0; j < n; ++j) {
      const Vec2 a1(v1[2 * j], v1[2 * j + 1]), a2(v2[2 * j], v2[2 * j + 1]);
      const double d = (a1[0] * a2[1] - a1[1] * a2[0]) / (a1.norm() * a2.norm());
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
    const double m = (dmin > 0.0) ? dmin : (dmax < 0.0 ? -dmax : 0.0);
    a.min_det = std::min(a.min_det, m);
    if (!(m > 0.0)) {
      a.independence = false;
      std::ostringstream os;
      os << "eigensections of winding " << w << " become dependent";
      a.violations.push_back(os.str());
    }
  }
  if (!std::isfinite(a.min_det)) a.min_det = 0.0;
  return a;
}

}  // namespace reeb
