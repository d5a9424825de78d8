#pragma once

#include <functional>
#include <limits>
#include <span>

#include <Eigen/Dense>

namespace reeb {

struct OdeOptions {
  double tol = 1e-10;
  double abs_tol = -1.0;  // negative: same as tol
  double min_step = 1e-14;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 picks one from the data
  long max_steps = 20'000'000;
};

using OdeRhs = std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy)>;

// Called at t0 and after every accepted step. stop_index is the index of the
// requested output time that was just hit, or -1. Returning false ends the run.
using OdeObserver = std::function<bool(double t, const Eigen::VectorXd& y, int stop_index)>;

struct OdeResult {
  double t = 0.0;
  Eigen::VectorXd y;
  long accepted = 0;
  long rejected = 0;
  bool stopped_early = false;
};

// Dormand-Prince 5(4) with FSAL and a standard step controller. t1 < t0 runs
// backwards. Every entry of `stops` (monotone in the direction of travel) is
// hit exactly. Throws StepUnderflow if the step drops below min_step.
OdeResult integrate_dopri(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0, double t1,
                          const OdeOptions& opt, std::span<const double> stops = {},
                          const OdeObserver& observer = {});

}  // namespace reeb
