#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "reeb321/config.hpp"
#include "reeb321/model.hpp"

namespace reeb {


struct ClosedCurve {
  std::vector<State4> samples;  // cyclic, the first sample is not repeated
  int orientation = 1;

  ClosedCurve reversed() const;
};

// Drops a repeated closing sample if present.
ClosedCurve curve_from_loop(const std::vector<State4>& loop);
ClosedCurve orbit_curve(const ReebOrbit& orbit, int n_samples = 1024);

struct Projection {
  State4 pole = State4::Zero();
  double pole_distance = 0.0;
  std::vector<std::vector<Vec3>> curves;
};

// Curves are radially normalized to the unit sphere, then projected from the
// best of 64 random poles.
Projection stereographic_project(const std::vector<ClosedCurve>& curves, const Tolerances& tol = {},
                                 std::uint64_t seed = 0);
// Projection from a given pole.
Projection stereographic_project_from(const std::vector<ClosedCurve>& curves, const State4& pole);

struct LinkingResult {
  double raw = 0.0;
  int lk = 0;
  double guard = 0.0;  // |raw - lk|
  double pole_distance = 0.0;
};

LinkingResult gauss_linking(const std::vector<Vec3>& c1, const std::vector<Vec3>& c2,
                            const Tolerances& tol = {});
LinkingResult linking_number(const ClosedCurve& c1, const ClosedCurve& c2, const Tolerances& tol = {},
                             std::uint64_t seed = 0);

using NodeSection = std::function<Vec4(const State4&)>;

ClosedCurve pushoff(const HamiltonianParams& p, const ClosedCurve& curve, const NodeSection& section,
                    double offset, const Tolerances& tol = {});

enum class PushoffFrame { xbar1, xbar2 };

struct SelfLinkResult {
  LinkingResult link;
  double offset = 0.0;
  double min_separation = 0.0;
};

SelfLinkResult self_linking(const HamiltonianParams& p, const ReebOrbit& orbit, const Tolerances& tol = {},
                            PushoffFrame frame = PushoffFrame::xbar1, std::uint64_t seed = 0);

double min_separation(const ClosedCurve& a, const ClosedCurve& b);

}  // namespace reeb
