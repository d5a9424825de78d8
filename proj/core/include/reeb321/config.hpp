#pragma once

#include <cstdint>
#include <string>

namespace reeb {

struct HamiltonianParams {
  double epsilon = 0.5;
  double a = -5.0 / 3.0;
  double b = -1.5;
  double c = 1.0;
  double d = -0.125;
  std::string preset_name = "validated";
};

// Every tolerance in one place. Defaults follow the module notes.
struct Tolerances {
  // model
  double surface = 1e-10;
  double path = 1e-7;
  double frame = 1e-8;
  double capture_radius = 0.1;
  int max_newton = 50;
  // integrator
  double integrator = 1e-10;
  double min_step = 1e-14;
  long max_steps = 20'000'000;
  // orbits
  double orbit = 1e-7;
  double crit = 1e-10;
  double merge = 1e-6;
  double level = 1e-8;
  double resonance = 1e-6;
  int max_m2 = 8;
  double launch_offset = 1e-6;
  double no_return_horizon = 1e4;
  double claim = 1e-9;
  // index
  double degen = 1e-6;
  double eig = 1e-8;
  double lie_step = 1e-5;
  int n_directions = 256;
  // spectrum
  double gap = 1e-6;
  double fd = 1e-5;
  double jacobi = 1e-12;
  double asymmetry = 1e-6;
  // knots
  int curve_samples = 1024;
  double sep = 1e-3;
  double pole = 0.05;
  double rounding_guard = 0.1;
  double pushoff_offset = 0.05;
  // leaves
  double asym = 1e-6;
  double endpoint_stop = 1e-8;
  double s_span = 200.0;
  double pairing = 1e-8;
  double wind_floor = 1e-10;
  double root = 1e-12;
};

struct Config {
  HamiltonianParams params;
  Tolerances tol;
  std::uint64_t seed = 0;
};

// "validated" (d = -1/8) or "paper-figure" (d = +1/8). Throws ConfigError otherwise.
HamiltonianParams preset(const std::string& name, double epsilon = 0.5);

}  // namespace reeb
