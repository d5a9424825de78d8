#include "reeb321/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reeb321/types.hpp"

namespace reeb {
namespace {

constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// 5th minus 4th order weights
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

double initial_step(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0,
                    const Eigen::VectorXd& f0, double span, const OdeOptions& opt) {
  const double atol = opt.abs_tol < 0.0 ? opt.tol : opt.abs_tol;
  const Eigen::ArrayXd sc = atol + opt.tol * y0.array().abs();
  const double d0 = (y0.array() / sc).matrix().lpNorm<Eigen::Infinity>();
  const double d1 = (f0.array() / sc).matrix().lpNorm<Eigen::Infinity>();
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  Eigen::VectorXd y1 = y0 + h0 * f0, f1(y0.size());
  rhs(t0 + h0, y1, f1);
  const double d2 = ((f1 - f0).array() / sc).matrix().lpNorm<Eigen::Infinity>() / h0;
  const double m = std::max(d1, d2);
  const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
  return std::min({100.0 * h0, h1, span});
}

}  // namespace

OdeResult integrate_dopri(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0, double t1,
                          const OdeOptions& opt, std::span<const double> stops,
                          const OdeObserver& observer) {
  const long n = y0.size();
  const double atol = opt.abs_tol < 0.0 ? opt.tol : opt.abs_tol;
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  OdeResult res;
  res.t = t0;
  res.y = y0;

  std::size_t next_stop = 0;
  // stops at t0 itself are reported immediately
  while (next_stop < stops.size() && std::abs(stops[next_stop] - t0) == 0.0) ++next_stop;
  int first_stop = next_stop > 0 ? static_cast<int>(next_stop) - 1 : -1;
  if (observer && !observer(t0, y0, first_stop)) {
    res.stopped_early = true;
    return res;
  }
  if (t1 == t0) return res;

  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
  rhs(t0, y0, k1);
  const double span = std::abs(t1 - t0);
  double h = opt.initial_step > 0.0 ? opt.initial_step : initial_step(rhs, t0, y0, k1, span, opt);
  h = std::min(h, opt.max_step);

  double t = t0;
  Eigen::VectorXd y = y0;
  bool last_rejected = false;
  while (true) {
    if (res.accepted + res.rejected > opt.max_steps)
      throw Error(ErrorCode::NoConvergence, "integrator exceeded max_steps");
    // target for this step: the next output time or the final time
    double target = t1;
    int stop_here = -1;
    if (next_stop < stops.size() && dir * (stops[next_stop] - t1) <= 0.0) {
      target = stops[next_stop];
      stop_here = static_cast<int>(next_stop);
    }
    double remaining = dir * (target - t);
    bool hits_target = false;
    double step = h;
    if (step >= remaining * (1.0 - 1e-12)) {
      step = remaining;
      hits_target = true;
    }
    if (step < opt.min_step && !hits_target) {
      throw Error(ErrorCode::StepUnderflow,
                  "step " + std::to_string(step) + " below min_step at t=" + std::to_string(t));
    }
    const double hs = dir * step;

    ytmp = y + hs * (a21 * k1);
    rhs(t + c2 * hs, ytmp, k2);
    ytmp = y + hs * (a31 * k1 + a32 * k2);
    rhs(t + c3 * hs, ytmp, k3);
    ytmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * hs, ytmp, k4);
    ytmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * hs, ytmp, k5);
    ytmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    const double tnew = hits_target ? target : t + hs;
    rhs(t + hs, ytmp, k6);
    ynew = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    rhs(tnew, ynew, k7);
    err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double en = 0.0;
    for (long i = 0; i < n; ++i) {
      const double sc = atol + opt.tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      en = std::max(en, std::abs(err[i]) / sc);
    }
    if (!std::isfinite(en)) en = 1e10;

    if (en <= 1.0) {
      ++res.accepted;
      t = tnew;
      y = ynew;
      k1 = k7;
      double fac = en == 0.0 ? 5.0 : 0.9 * std::pow(en, -0.2);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      last_rejected = false;
      if (!hits_target || step >= h * 0.5) h = std::min(step * fac, opt.max_step);
      int reported = -1;
      if (hits_target && stop_here >= 0) {
        reported = stop_here;
        ++next_stop;
      }
      res.t = t;
      res.y = y;
      if (observer && !observer(t, y, reported)) {
        res.stopped_early = true;
        return res;
      }
      if (hits_target && stop_here < 0) return res;
      if (hits_target && stop_here >= 0 && target == t1) return res;
    } else {
      ++res.rejected;
      last_rejected = true;
      h = step * std::max(0.2, 0.9 * std::pow(en, -0.2));
      if (h < opt.min_step)
        throw Error(ErrorCode::StepUnderflow,
                    "step below min_step at t=" + std::to_string(t));
    }
  }
}

}  // namespace reeb
