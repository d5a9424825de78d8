#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reeb321/config.hpp"
#include "reeb321/model.hpp"

namespace reeb {

enum class LeafInterval { disk_to_P2, cyl_P2_P1, cyl_P3_P1, plane_to_P3 };
enum class EndLabel { removable, P1, P2, P3 };
enum class LeafEnd { pos, neg };

const char* leaf_interval_name(LeafInterval w);
LeafInterval parse_leaf_interval(const std::string& s);
const char* end_label_name(EndLabel e);

// f^2 = 1 - 2 H2(g, 0).
double profile_f2(const HamiltonianParams& p, double g);
// g' = -2 pi f^2 Q / (f^2 + Q^2), Q = Q(g, 0). Throws OutsideEnergyCap when f^2 < 0.
double profile_rhs(const HamiltonianParams& p, double g);
// g' = -h pi f^2 Q / (1 + h (Q - g) Q), h = 2 / (f^2 + g Q).
double profile_rhs_printed(const HamiltonianParams& p, double g);

struct XbarRoots {
  double plus = 0.0;
  double minus = 0.0;
};

XbarRoots solve_xbar(const HamiltonianParams& p, const Tolerances& tol = {});

struct IntervalData {
  LeafInterval which = LeafInterval::plane_to_P3;
  double lo = 0.0, hi = 0.0;
  double g_neg = 0.0, g_pos = 0.0;  // limits of g at s -> -inf / +inf
  EndLabel neg = EndLabel::removable, pos = EndLabel::P3;
  std::string role;
};

IntervalData interval_data(const HamiltonianParams& p, LeafInterval which, const Tolerances& tol = {});

struct LeafProfile {
  IntervalData interval;
  std::vector<double> s, g, f, a;
  bool uniform = false;
  double ds = 0.0;
  double neg_gap = 0.0;  // |g - g_neg| at the first node
  double pos_gap = 0.0;

  std::size_t size() const { return s.size(); }
};

// Integrates (g, a), a' = pi f^2, from the interval midpoint at s = 0 in both
// directions. ds > 0 samples on the uniform grid s = k ds, otherwise at the
// accepted steps.
LeafProfile integrate_profile(const HamiltonianParams& p, LeafInterval which, const Tolerances& tol = {},
                              double ds = 0.0);

struct LeafMap {
  LeafProfile profile;
  int n_t = 0;
  std::vector<State4> u;  // u[i * n_t + j] at (s_i, j / n_t)
  double level_error = 0.0;

  const State4& at(std::size_t i, int j) const { return u[i * n_t + j]; }
};

LeafMap assemble_leaf(const HamiltonianParams& p, const LeafProfile& profile, int n_t = 64);

enum class SectionVerdict { strong, fails, indefinite };
const char* section_verdict_name(SectionVerdict v);

struct SectionCheck {
  std::vector<double> pairing;  // per node t_j = j / n
  SectionVerdict verdict = SectionVerdict::indefinite;
  int sign = 0;
  double margin = 0.0;  // min |pairing|
};

// Pairing d lambda(eta, L_R eta) of a section along an orbit at n nodes.
SectionCheck section_pairing_check(const HamiltonianParams& p, const ReebOrbit& orbit, const Section& eta,
                                   int n_nodes, const Tolerances& tol = {});
// eta is the normalized projection of u_s at the end node, carried to the orbit
// in the global frame coordinates. Throws PreconditionViolation at removable ends.
SectionCheck strong_section_check(const HamiltonianParams& p, const LeafMap& leaf, LeafEnd end,
                                  const Tolerances& tol = {}, int n_nodes = 64);

struct LeafDiagnostics {
  double cr_residual_max = 0.0;
  double hofer_energy = 0.0;
  double mass_neg_end = 0.0;
  double dlambda_area = 0.0;
  int wind_infty_pos = 0;
  std::optional<int> wind_infty_neg;  // set when the negative end is an orbit
  int section_pairing_sign = 0;       // 0: indefinite
  SectionVerdict section_verdict = SectionVerdict::indefinite;
  double transversality_min = 0.0;
  double level_error = 0.0;
  double hausdorff_pos = 0.0;
  std::optional<double> hausdorff_neg;
  bool g_monotone = false;
  bool a_increasing = false;
};

LeafDiagnostics leaf_diagnostics(const HamiltonianParams& p, const LeafMap& leaf, const Tolerances& tol = {});

struct FredholmData {
  int mu_pos = 0;
  int mu_neg = 0;  // 0 when the negative end is removable
  int euler = 2;
  int punctures = 1;
  int index = 0;
  int wind_infty = 0;
  int wind_pi = 0;
};

struct AtlasLeaf {
  LeafInterval which = LeafInterval::plane_to_P3;
  std::string role;
  LeafMap leaf;
  LeafDiagnostics diagnostics;
  FredholmData fredholm;
};

struct FoliationAtlas {
  std::vector<AtlasLeaf> leaves;
  std::vector<ReebOrbit> binding;
  std::vector<Vec2> binding_points;
  XbarRoots xbar;
  std::vector<std::vector<Vec2>> separatrix;  // projection onto (x2, y2)
  std::vector<std::string> not_constructed;   // off-axis rigid cylinders
};

FoliationAtlas foliation_atlas(const HamiltonianParams& p, const Tolerances& tol = {}, double ds = 1.0 / 64.0,
                               int n_t = 128);

}  // namespace reeb
