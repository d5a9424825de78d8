#include "reeb321/config.hpp"

#include "reeb321/types.hpp"

namespace reeb {

HamiltonianParams preset(const std::string& name, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::ConfigError, "epsilon must be positive");
  HamiltonianParams p;
  p.epsilon = epsilon;
  p.a = -5.0 / 3.0;
  p.b = -1.5;
  p.c = 1.0;
  if (name == "validated") {
    p.d = -0.125;
  } else if (name == "paper-figure") {
    p.d = 0.125;
  } else {
    throw Error(ErrorCode::ConfigError, "unknown preset '" + name + "'");
  }
  p.preset_name = name;
  return p;
}

}  // namespace reeb
