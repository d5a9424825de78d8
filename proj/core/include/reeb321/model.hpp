#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "reeb321/config.hpp"
#include "reeb321/types.hpp"

namespace reeb {

// ---- Hamiltonian ----------------------------------------------------------

struct HamiltonianValue {
  double H = 0.0;
  Vec4 gradient = Vec4::Zero();
  Mat4 hessian = Mat4::Zero();
};

double h2(const HamiltonianParams& p, double x, double y);
Vec2 h2_gradient(const HamiltonianParams& p, double x, double y);  // (Q, P)
Mat2 h2_hessian(const HamiltonianParams& p, double x, double y);
inline double q_of(const HamiltonianParams& p, double x, double y) { return h2_gradient(p, x, y)[0]; }
inline double p_of(const HamiltonianParams& p, double x, double y) { return h2_gradient(p, x, y)[1]; }

HamiltonianValue hamiltonian_eval(const HamiltonianParams& p, const State4& z);
double energy(const HamiltonianParams& p, const State4& z);

// ---- contact form and fields ---------------------------------------------

struct ContactPairing {
  double lambda_u = 0.0;
  double dlambda_uv = 0.0;
};

double liouville(const State4& z, const Vec4& u);
double dlambda(const Vec4& u, const Vec4& v);
ContactPairing contact_eval(const State4& z, const Vec4& u, const Vec4& v);

struct VectorFields {
  Vec4 xh = Vec4::Zero();
  double h = 0.0;
  Vec4 reeb = Vec4::Zero();
};

Vec4 hamiltonian_field(const HamiltonianParams& p, const State4& z);
// Throws NotStarShaped when lambda0(X_H) <= 0.
VectorFields vector_fields(const HamiltonianParams& p, const State4& z);
// Jacobian of the Reeb field h*X_H (no surface check).
Mat4 reeb_jacobian(const HamiltonianParams& p, const State4& z);
Mat4 hamiltonian_jacobian(const HamiltonianParams& p, const State4& z);

struct ContactFrame {
  State4 base = State4::Zero();
  Vec4 X1, X2, X3;
  Vec4 Xbar1, Xbar2;
  Vec4 reeb;

  // Coordinates of v (mod R) in the basis (Xbar1, Xbar2).
  Vec2 coords(const Vec4& v) const;
  // Projection TS -> xi along R.
  Vec4 project(const Vec4& v) const;
  Vec4 apply_J(const Vec4& v) const;
};

ContactFrame contact_frame(const HamiltonianParams& p, const State4& z, double frame_tol = 1e-8);

// Orbit-adapted frame along the special orbits: lifts of e_x2, e_y2 to xi.
std::pair<Vec4, Vec4> rho_frame(const HamiltonianParams& p, const State4& z, double frame_tol = 1e-8);

State4 surface_project(const HamiltonianParams& p, const State4& z, const Tolerances& tol = {});

// ---- flows ----------------------------------------------------------------

enum class TimeKind { hamiltonian, reeb };

struct Trajectory {
  std::vector<double> times;
  std::vector<State4> states;
  TimeKind time_kind = TimeKind::reeb;
  double energy_drift = 0.0;
  std::vector<Mat4> fundamental;  // filled when integrated with the variational part
};

struct FlowOptions {
  bool with_variational = false;
  double tol = 1e-10;
  double min_step = 1e-14;
  std::vector<double> output_times;  // if set only these nodes are recorded (plus t=0)
};

Trajectory integrate_flow(const HamiltonianParams& p, const State4& z0, double T, TimeKind kind,
                          const FlowOptions& opt = {});

// Final state (and optionally the fundamental matrix) only.
State4 flow_point(const HamiltonianParams& p, const State4& z0, double T, TimeKind kind,
                  double tol = 1e-12, Mat4* fundamental = nullptr);

void write_trajectory_csv(const HamiltonianParams& p, const Trajectory& tr, std::ostream& os);

// ---- orbits and linearized flow on xi ------------------------------------

enum class OrbitLabel { P1, P2, P3, resonant, homoclinic_limit };
const char* orbit_label_name(OrbitLabel l);

struct ReebOrbit {
  OrbitLabel label = OrbitLabel::P2;
  Vec2 z2_datum = Vec2::Zero();
  double r = 1.0;
  double reeb_period = kPi;
  int m1 = 1;
  int m2 = 0;
  int multiplicity = 1;

  State4 initial_point() const { return State4(r, 0.0, z2_datum[0], z2_datum[1]); }
};

enum class FrameKind { rho_orbit_frame, global_frame };

struct SymplecticPath {
  std::vector<double> grid;  // on [0,1], grid.front() = 0, grid.back() = 1
  std::vector<Mat2> matrices;
  FrameKind frame_kind = FrameKind::global_frame;
  std::optional<ReebOrbit> orbit;
  // Set for closed-form paths Phi(t) = exp(t*A): build_S uses -J0*A directly.
  std::optional<Mat2> generator;
  // Nodes of the 4x4 flow and the frame when available (index module uses them).
  std::vector<State4> base_points;
  std::vector<Mat4> fundamental;

  std::size_t size() const { return matrices.size(); }
};

// Basis of xi in the requested frame at a point.
std::pair<Vec4, Vec4> frame_basis(const HamiltonianParams& p, const State4& z, FrameKind kind,
                                  double frame_tol = 1e-8);

// Coordinates (a1, a2) with v = a1*F1 + a2*F2 + b*R, by least squares.
Vec2 frame_coordinates(const Vec4& v, const Vec4& f1, const Vec4& f2, const Vec4& reeb);

SymplecticPath restrict_linearized_to_xi(const HamiltonianParams& p, const ReebOrbit& orbit,
                                         FrameKind kind, int n_samples, const Tolerances& tol = {});

// Sections along an orbit are functions of the normalized time t in [0,1].
using Section = std::function<Vec4(double t)>;

// d/ds at s=0 of dphi^{-s}(x(Tt+s)) eta(t + s/T), by central differences.
Vec4 lie_derivative_along_orbit(const HamiltonianParams& p, const ReebOrbit& orbit,
                                const Section& eta, double t, double step, double tol = 1e-12);

}  // namespace reeb
