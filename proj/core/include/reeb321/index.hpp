#pragma once

#include <vector>

#include "reeb321/config.hpp"
#include "reeb321/model.hpp"
#include "reeb321/orbits.hpp"

namespace reeb {

struct WindingInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains_integer = false;
  double degenerate_margin = 0.0;
};

// Winding of t -> Phi(t) z0 in full turns.
double winding_number(const SymplecticPath& path, const Vec2& z0);

// Never throws on degeneracy; see winding_interval for the checked version.
WindingInterval winding_interval_unchecked(const SymplecticPath& path, int n_directions = 256);
WindingInterval winding_interval(const SymplecticPath& path, int n_directions = 256,
                                 double degen_tol = 1e-6);

enum class CZMethod { winding_interval, analytic_oracle, spectral };
const char* cz_method_name(CZMethod m);

struct CZResult {
  int mu_local = 0;
  int frame_correction = 0;
  int mu_global = 0;
  CZMethod method = CZMethod::winding_interval;
};

int cz_from_interval(const WindingInterval& w);
CZResult cz_index(const SymplecticPath& path, int frame_correction, const Tolerances& tol = {},
                  CZMethod method = CZMethod::winding_interval);

using FrameSamples = std::vector<std::pair<Vec4, Vec4>>;

// Winding of the first vector of frame A in the coordinates of frame B over a
// closed loop of nodes (last node = first node).
int trivialization_winding(const FrameSamples& frame_a, const FrameSamples& frame_b);

// Winding of rho against the global frame along a special orbit.
int special_frame_correction(const HamiltonianParams& p, const ReebOrbit& orbit, int n = 256,
                             const Tolerances& tol = {});

// Phi(tau) = exp(tau T K), K = [[0,k1],[k2,0]], on a uniform grid, rho frame.
SymplecticPath analytic_monodromy_oracle(const HamiltonianParams& p, OrbitLabel which,
                                         int n_samples = 256);
Mat2 exp_offdiag(double k1, double k2, double s);

// k-fold iterate on k*n+1 nodes via Phi(t + j) = Phi(t) Phi(1)^j.
SymplecticPath iterate_path(const SymplecticPath& path, int k);
// k-fold iterate sampled on the original n+1 uniform nodes.
SymplecticPath iterate_path_resampled(const SymplecticPath& path, int k);
CZResult iterate_index(const SymplecticPath& path, int k, int frame_correction,
                       const Tolerances& tol = {});

enum class Quadrant { I, II, III, IV };
enum class PairingSign { positive, negative, mixed };
const char* quadrant_name(Quadrant q);
const char* pairing_sign_name(PairingSign s);

struct EigenFrame {
  ReebOrbit orbit;
  std::vector<double> grid;
  std::vector<State4> base;
  std::vector<Vec4> v_minus;  // expanding direction, multiplier beta
  std::vector<Vec4> v_plus;   // contracting direction, multiplier 1/beta
  double multiplier_beta = 0.0;
  double eig_residual = 0.0;
};

struct QuadrantReport {
  EigenFrame frame;
  std::vector<Quadrant> quadrants;
  std::vector<double> pairing;
  PairingSign pairing_sign = PairingSign::mixed;
  bool near_zero_pairing = false;
};

// Eigen-directions of the linearized return map propagated along the orbit.
EigenFrame eigenframe(const HamiltonianParams& p, const ReebOrbit& orbit, int n_nodes = 256,
                      const Tolerances& tol = {});
Quadrant classify_quadrant(const Vec4& eta, const Vec4& v_minus, const Vec4& v_plus);

// Section with rho-frame coordinates (cos phi, sin phi), phi = phi0 + amp sin(2 pi t).
Section rho_test_section(const HamiltonianParams& p, const ReebOrbit& orbit, double phi0, double amp,
                         double frame_tol = 1e-8);

QuadrantReport eigenframe_and_quadrants(const HamiltonianParams& p, const ReebOrbit& orbit,
                                        const Section& section, int n_nodes = 256,
                                        const Tolerances& tol = {});

}  // namespace reeb
