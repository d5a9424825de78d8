#include "reeb321/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "reeb321/types.hpp"

namespace reeb {

namespace {

struct Rotation {
  int p, q;
  double c, s;
};

}  // namespace

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& A, double tol, int max_sweeps) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw Error(ErrorCode::PreconditionViolation, "matrix must be square");
  const std::size_t N = static_cast<std::size_t>(n);
  // column-major copy; a(i,j) = a[i + n*j]
  std::vector<double> a(A.data(), A.data() + N * N);
  std::vector<double> v(N * N, 0.0);
  for (std::size_t i = 0; i < N; ++i) v[i + N * i] = 1.0;
  auto at = [&](int i, int j) -> double& { return a[i + N * j]; };

  const double fro = std::max(A.norm(), 1e-300);
  SymmetricEigen out;
  auto off_norm = [&]() {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < j; ++i) s += at(i, j) * at(i, j);
    return std::sqrt(2.0 * s);
  };

  // Round-robin ordering: each round is n/2 disjoint pairs, so its rotations
  // commute and are applied as one column pass and one row pass.
  const int m = n + (n % 2);
  std::vector<int> players(m);
  std::iota(players.begin(), players.end(), 0);
  std::vector<Rotation> rot;
  rot.reserve(m / 2);

  auto rotate_cols = [&](std::vector<double>& x) {
    for (const Rotation& r : rot) {
      double* cp = &x[N * r.p];
      double* cq = &x[N * r.q];
      for (std::size_t i = 0; i < N; ++i) {
        const double g = cp[i], h = cq[i];
        cp[i] = r.c * g - r.s * h;
        cq[i] = r.s * g + r.c * h;
      }
    }
  };

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double off = off_norm();
    out.off_norm = off;
    if (off <= tol * fro) break;
    out.sweeps = sweep + 1;
    // skip small entries in the first sweeps
    const double thresh = sweep < 3 ? 0.2 * off / (static_cast<double>(n) * n) : 0.0;
    for (int round = 0; round + 1 < m; ++round) {
      rot.clear();
      for (int k = 0; k < m / 2; ++k) {
        int p = players[k], q = players[m - 1 - k];
        if (p >= n || q >= n) continue;
        if (p > q) std::swap(p, q);
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p), aqq = at(q, q);
        if (sweep > 3 && std::abs(apq) < 1e-300 + 1e-18 * (std::abs(app) + std::abs(aqq))) {
          at(p, q) = at(q, p) = 0.0;
          continue;
        }
        if (std::abs(apq) <= thresh) continue;
        const double theta = 0.5 * (aqq - app) / apq;
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        rot.push_back({p, q, c, t * c});
      }
      if (!rot.empty()) {
        rotate_cols(a);
        for (int j = 0; j < n; ++j) {
          double* col = &a[N * j];
          for (const Rotation& r : rot) {
            const double g = col[r.p], h = col[r.q];
            col[r.p] = r.c * g - r.s * h;
            col[r.q] = r.s * g + r.c * h;
          }
        }
        for (const Rotation& r : rot) at(r.p, r.q) = at(r.q, r.p) = 0.0;
        rotate_cols(v);
      }
      std::rotate(players.begin() + 1, players.end() - 1, players.end());
    }
  }
  out.off_norm = off_norm();
  if (out.off_norm > tol * fro)
    throw Error(ErrorCode::NoConvergence, "Jacobi sweeps exhausted");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return at(i, i) < at(j, j); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = at(order[k], order[k]);
    for (int r = 0; r < n; ++r) out.vectors(r, k) = v[r + N * order[k]];
  }
  return out;
}

}  // namespace reeb
