#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reeb321/config.hpp"
#include "reeb321/index.hpp"
#include "reeb321/model.hpp"

namespace reeb {

struct OperatorModel {
  std::optional<ReebOrbit> orbit;
  FrameKind frame_kind = FrameKind::global_frame;
  std::vector<Mat2> S;  // nodes t_j = j/n, j = 0..n-1
  int n_nodes = 0;
  double asymmetry = 0.0;    // max |S - S^T| before symmetrizing
  double fd_residual = 0.0;  // max |Phi' - J0 S Phi| at the nodes
  bool constant = false;
};

OperatorModel build_S(const SymplecticPath& path, const Tolerances& tol = {});
OperatorModel constant_operator(const Mat2& S, int n_nodes);

// The exactly symmetric 2n x 2n matrix of -J0 D - S, D the fourth-order
// centered periodic difference.
Eigen::MatrixXd operator_matrix(const OperatorModel& model);

struct SpectrumReport {
  int n_nodes = 0;
  std::vector<double> eigenvalues;  // trusted band, ascending
  std::vector<int> windings;
  std::vector<Eigen::VectorXd> eigenvectors;
  int excluded = 0;                 // eigenpairs with unresolved winding
  double nu_neg = 0.0;
  double nu_pos = 0.0;
  int wind_neg = 0;
  int wind_pos = 0;
  int p = 0;
  int mu_tilde = 0;
  double gap = 0.0;                 // min |eigenvalue| over the full spectrum
  bool resolved = false;            // nu_neg and nu_pos found with p in {0,1}
  std::vector<double> all_eigenvalues;
};

SpectrumReport discretize_and_solve(const OperatorModel& model, int n_nodes, const Tolerances& tol = {});

// Throws BandTooNarrow if nu_neg / nu_pos were not resolved.
CZResult generalized_cz(const SpectrumReport& report, int frame_correction);

struct SpectrumAudit {
  bool monotone = true;
  bool pairs = true;
  bool independence = true;
  double min_det = 0.0;
  std::vector<std::string> violations;
  bool pass() const { return monotone && pairs && independence; }
};

// Throws BandTooNarrow unless windings -band..band are all present.
SpectrumAudit spectrum_property_audit(const SpectrumReport& report, int band = 2);

}  // namespace reeb
