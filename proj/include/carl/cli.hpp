#ifndef CARL_CLI_HPP
#define CARL_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "carl/params.hpp"

namespace carl {

/// Resolved configuration for one command invocation.  The CSV header block
/// written by each command echoes every field that shaped the run, so a file
/// can be reproduced byte-for-byte from its own header.
struct RunConfig {
  std::string command;           // sweep | map | simulate | derive | zerot
  std::string model = "both";    // rao | wao | both (simulate: rao | wao)
  std::string temp = "zero";     // "zero" or the ratio T/T_R as a number
  double alpha = 10.0;

  // detuning axis (sweep, zerot) and single-point override
  double delta_min = -10.0;
  double delta_max = 10.0;
  int points = 400;
  std::optional<double> delta;

  // alpha axis (map)
  double alpha_min = 0.0;
  double alpha_max = 3.0;
  int alpha_points = 201;

  int figure = 0;  // 1, 2 (sweep presets), 3 (map preset); 0 = none

  // simulate
  std::string dynamics = "nonlinear";  // nonlinear | linearized | oscillator
  std::int64_t n_particles = 10000;
  double dt = 1e-3;
  std::int64_t n_steps = 6000;
  std::int64_t stride = 10;
  int half_width = 8;
  int families = 1;
  std::uint64_t seed = 1;
  bool quiet_start = true;
  double probe0 = 1e-6;

  // derive
  PhysicalParams phys;

  std::string output = "-";  // "-" = stdout
  int workers = 0;           // 0 = CARL_WORKERS env or hardware default
};

/// Executes a fully parsed configuration.  Throws std::domain_error (and
/// relatives) on configuration problems, NumericalDiagnostic or
/// IntegrationAbort on numerical failures.
void run_command(const RunConfig& cfg);

/// Worker-count resolution: explicit flag > CARL_WORKERS env > hardware.
int resolve_workers(int requested);

/// "zero" or a positive T/T_R ratio -> thermal spec (beta = sqrt(T_R/T)).
ThermalSpec parse_thermal(const std::string& temp);

/// 17-significant-digit formatting used for all CSV numbers.
std::string format_double(double x);

}  // namespace carl

#endif  // CARL_CLI_HPP
