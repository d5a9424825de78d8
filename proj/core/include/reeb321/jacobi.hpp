#pragma once

#include <Eigen/Dense>

namespace reeb {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns match values
  int sweeps = 0;
  double off_norm = 0.0;
};

// Cyclic Jacobi with thresholding. Stops once the off-diagonal Frobenius norm
// falls below tol times the Frobenius norm of A.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& A, double tol = 1e-12, int max_sweeps = 100);

}  // namespace reeb
