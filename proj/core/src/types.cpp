#include "reeb321/types.hpp"

namespace reeb {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotStarShaped: return "NotStarShaped";
    case ErrorCode::DegenerateFrame: return "DegenerateFrame";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::HypothesisFailure: return "HypothesisFailure";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NoReturn: return "NoReturn";
    case ErrorCode::NotHyperbolic: return "NotHyperbolic";
    case ErrorCode::SamplingTooCoarse: return "SamplingTooCoarse";
    case ErrorCode::DegenerateOrbit: return "DegenerateOrbit";
    case ErrorCode::RoundingUnsafe: return "RoundingUnsafe";
    case ErrorCode::VanishingSection: return "VanishingSection";
    case ErrorCode::AsymmetryTooLarge: return "AsymmetryTooLarge";
    case ErrorCode::BandTooNarrow: return "BandTooNarrow";
    case ErrorCode::NoSafePole: return "NoSafePole";
    case ErrorCode::OffsetTooLarge: return "OffsetTooLarge";
    case ErrorCode::OutsideEnergyCap: return "OutsideEnergyCap";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::SlowConvergence: return "SlowConvergence";
    case ErrorCode::UnreliableWinding: return "UnreliableWinding";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace reeb
