#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace reeb {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

// Points of R^4 are stored as (x1, y1, x2, y2).
using State4 = Vec4;

enum class ErrorCode {
  NotStarShaped,
  DegenerateFrame,
  StepUnderflow,
  NoConvergence,
  PreconditionViolation,
  HypothesisFailure,
  NotClosed,
  NoReturn,
  NotHyperbolic,
  SamplingTooCoarse,
  DegenerateOrbit,
  RoundingUnsafe,
  VanishingSection,
  AsymmetryTooLarge,
  BandTooNarrow,
  NoSafePole,
  OffsetTooLarge,
  OutsideEnergyCap,
  BracketFailure,
  SlowConvergence,
  UnreliableWinding,
  ConfigError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// J0 = [[0,-1],[1,0]]
inline Mat2 j0() {
  Mat2 m;
  m << 0.0, -1.0, 1.0, 0.0;
  return m;
}

}  // namespace reeb
