#pragma once

#include <string>
#include <vector>

#include "reeb321/config.hpp"
#include "reeb321/model.hpp"

namespace reeb {

enum class HessianSignature { min, max, saddle, degenerate };
enum class FlowType { elliptic, hyperbolic };
const char* signature_name(HessianSignature s);
const char* flow_type_name(FlowType f);

struct CriticalPoint {
  Vec2 location = Vec2::Zero();
  double h2_value = 0.0;
  HessianSignature signature = HessianSignature::degenerate;
  FlowType flow_type = FlowType::elliptic;
  double k1 = 0.0;
  double k2 = 0.0;
  bool on_axis = true;
};

struct CriticalPointReport {
  std::vector<CriticalPoint> points;  // axis points first, sorted by x
  bool structure_ok = true;
  std::string mismatch;               // empty when structure_ok
};

CriticalPointReport find_critical_points(const HamiltonianParams& p, const Tolerances& tol = {});

// Linearization constants of the Reeb flow at a critical point lying on the
// axis orbit through it: k1 = -h Hyy, k2 = h Hxx with h = 2/r^2.
CriticalPoint classify_critical_point(const HamiltonianParams& p, const Vec2& z);

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct SpecialOrbits {
  ReebOrbit P1, P2, P3;
  CriticalPoint c1, c2, c3;
  std::vector<InequalityCheck> chain;
  bool chain_ok = false;
  bool pattern_ok = false;  // k-sign pattern (+,-), (+,+), (-,+)

  const ReebOrbit& orbit(OrbitLabel l) const;
  const CriticalPoint& point(OrbitLabel l) const;
};

// Builds P1, P2, P3 from the axis critical points. Throws HypothesisFailure
// only when the axis points do not exist.
SpecialOrbits special_orbits_unchecked(const HamiltonianParams& p, const Tolerances& tol = {});
// As above, and throws HypothesisFailure naming the first violated inequality.
SpecialOrbits special_orbits(const HamiltonianParams& p, const Tolerances& tol = {});

// Closed-form sample of a special orbit at n points (first point repeated at the end).
std::vector<State4> special_orbit_loop(const ReebOrbit& orbit, int n);

// Integral of lambda0 over a sampled loop whose last sample repeats the first.
double orbit_action(const std::vector<State4>& loop, double orbit_tol = 1e-7);

struct PlanarLoop {
  double level = 0.0;
  double tau = 0.0;             // Hamiltonian-time period
  double area = 0.0;            // signed, from the area ODE
  std::vector<Vec2> samples;    // uniform in time, last repeats first
};

PlanarLoop planar_period_and_area(const HamiltonianParams& p, double C, const Vec2& seed,
                                  const Tolerances& tol = {}, int n_samples = 512);

// Product loop on S: z1 turns m1 times while the z2 loop is run m2 times.
std::vector<State4> product_loop(double C, const PlanarLoop& loop, int m1, int m2);

struct ClaimResult {
  double h_sup = 0.0;
  double T_ham = 0.0;
  double product = 0.0;
  bool pass = false;
};

// Hamiltonian-time loop in R^4 (uses the full Hessian of H).
ClaimResult claim1_check(const HamiltonianParams& p, const std::vector<State4>& loop, double T_ham,
                         const Tolerances& tol = {});
// Planar loop of the z2 system (uses the Hessian of H2).
ClaimResult claim1_check(const HamiltonianParams& p, const std::vector<Vec2>& loop, double T_ham,
                         const Tolerances& tol = {});

struct ScanLoop {
  double C = 0.0;
  int component = 0;
  Vec2 seed = Vec2::Zero();
  double tau = 0.0;
  double area = 0.0;
  double level_error = 0.0;
  int best_m1 = 0;
  int best_m2 = 0;
  double best_action = 0.0;
  ClaimResult claim;
  PlanarLoop loop;
};

struct ScanCandidate {
  double C = 0.0;
  int component = 0;
  int m1 = 0;
  int m2 = 0;
  double action = 0.0;
  std::size_t loop_index = 0;  // into ScanResult::loops
};

struct ScanExclusion {
  double C = 0.0;
  Vec2 seed = Vec2::Zero();
  std::string reason;
};

struct ScanResult {
  std::vector<ScanCandidate> candidates;
  std::vector<ScanLoop> loops;
  std::vector<ScanExclusion> excluded;
};

std::vector<double> default_level_grid(const HamiltonianParams& p, int n_levels);
ScanResult resonant_orbit_scan(const HamiltonianParams& p, double action_bound,
                               const std::vector<double>& levels, const Tolerances& tol = {});

// Real roots of H2(x,0) = C and H2(0,y) = C.
std::vector<Vec2> level_seeds(const HamiltonianParams& p, double C);

struct SeparatrixBranch {
  std::string branch_id;
  std::vector<Vec2> samples;
  Vec2 launch_vector = Vec2::Zero();
  double enclosed_area = 0.0;
  double axis_crossing = 0.0;  // positive x2 where the branch meets y2 = 0
  double duration = 0.0;       // Hamiltonian time from launch to return
  double level_error = 0.0;
};

struct SeparatrixResult {
  SeparatrixBranch gamma1, gamma2;
  std::vector<Trajectory> homoclinic;  // Reeb time, one per branch, times in [-horizon, horizon]
  double end_distance_forward = 0.0;   // max over branches, distance to P2 as a set
  double end_distance_backward = 0.0;
  Vec2 unstable = Vec2::Zero();
  Vec2 stable = Vec2::Zero();
  double planar_rate = 0.0;
};

SeparatrixResult separatrix_and_homoclinics(const HamiltonianParams& p, double launch_offset,
                                            double horizon, const Tolerances& tol = {},
                                            bool launch_stable = false);

double distance_to_p2(const State4& z);

}  // namespace reeb
