// carl - command-line front end for the CARL instability laboratory.
//
// Subcommands: sweep, map, simulate, derive, zerot.  Exit codes: 0 ok,
// 1 configuration error, 2 numerical diagnostic.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "carl/cli.hpp"
#include "carl/dispersion.hpp"
#include "carl/ode.hpp"
#include "carl/version.hpp"

namespace {

void add_common(CLI::App* sub, carl::RunConfig& cfg) {
  sub->add_option("-o,--output", cfg.output, "output CSV path ('-' = stdout)");
  sub->add_option("--workers", cfg.workers, "worker threads (default: CARL_WORKERS or hardware)");
  sub->set_config("--config", "", "key=value configuration file (flags win)");
  sub->allow_config_extras(false);
}

void add_delta_axis(CLI::App* sub, carl::RunConfig& cfg) {
  sub->add_option("--delta-min", cfg.delta_min, "lower end of the detuning range");
  sub->add_option("--delta-max", cfg.delta_max, "upper end of the detuning range");
  sub->add_option("--points", cfg.points, "number of detuning samples");
  sub->add_option("--delta", [&cfg](const std::vector<std::string>& v) {
    cfg.delta = std::stod(v.at(0));
    return true;
  }, "single detuning value (overrides the range)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collective atomic recoil laser: growth rates, stability maps, dynamics"};
  app.set_version_flag("--version", carl::kVersion);
  app.require_subcommand(1);

  carl::RunConfig cfg;

  auto* sweep = app.add_subcommand("sweep", "growth rate vs detuning for both models");
  sweep->add_option("--model", cfg.model, "rao | wao | both")->default_str("both");
  sweep->add_option("--alpha", cfg.alpha, "dimensionless coupling");
  sweep->add_option("--temp", cfg.temp, "'zero' or T/T_R ratio");
  sweep->add_option("--figure", cfg.figure, "preset 1 (alpha=10) or 2 (alpha=0.1)");
  add_delta_axis(sweep, cfg);
  add_common(sweep, cfg);

  auto* map = app.add_subcommand("map", "instability map over (delta, alpha)");
  map->add_option("--model", cfg.model, "rao | wao | both")->default_str("both");
  map->add_option("--temp", cfg.temp, "'zero' or T/T_R ratio");
  map->add_option("--figure", cfg.figure, "preset 3 (zero-T operating regime)");
  map->add_option("--delta-min", cfg.delta_min, "");
  map->add_option("--delta-max", cfg.delta_max, "");
  map->add_option("--points", cfg.points, "detuning samples");
  map->add_option("--alpha-min", cfg.alpha_min, "");
  map->add_option("--alpha-max", cfg.alpha_max, "");
  map->add_option("--alpha-points", cfg.alpha_points, "coupling samples");
  add_common(map, cfg);

  auto* sim = app.add_subcommand("simulate", "integrate the RAO or WAO dynamics");
  sim->add_option("--model", cfg.model, "rao | wao")->required();
  sim->add_option("--dynamics", cfg.dynamics, "nonlinear | linearized | oscillator");
  sim->add_option("--alpha", cfg.alpha, "dimensionless coupling");
  sim->add_option("--delta", [&cfg](const std::vector<std::string>& v) {
    cfg.delta = std::stod(v.at(0));
    return true;
  }, "detuning (default 0)");
  sim->add_option("--temp", cfg.temp, "'zero' or T/T_R ratio");
  sim->add_option("--particles", cfg.n_particles, "ensemble size / velocity groups");
  sim->add_option("--dt", cfg.dt, "time step in tau units");
  sim->add_option("--steps", cfg.n_steps, "number of steps");
  sim->add_option("--stride", cfg.stride, "recording stride");
  sim->add_option("--half-width", cfg.half_width, "momentum lattice half-width");
  sim->add_option("--families", cfg.families, "fractional-offset families (finite T)");
  sim->add_option("--seed", cfg.seed, "random seed");
  sim->add_flag("!--random-start", cfg.quiet_start, "random initial phases instead of quiet start");
  sim->add_option("--probe0", cfg.probe0, "initial probe amplitude |A(0)|");
  add_common(sim, cfg);

  auto* derive = app.add_subcommand("derive", "physical -> dimensionless parameters");
  derive->add_option("--mass", cfg.phys.mass, "atomic mass [kg]")->required();
  derive->add_option("--k1", cfg.phys.k1, "probe wavenumber [1/m]")->required();
  derive->add_option("--k2", cfg.phys.k2, "pump wavenumber [1/m]")->required();
  derive->add_option("--omega0", cfg.phys.omega0, "atomic frequency [rad/s]")->required();
  derive->add_option("--omega1", cfg.phys.omega1, "probe frequency [rad/s]")->required();
  derive->add_option("--omega2", cfg.phys.omega2, "pump frequency [rad/s]")->required();
  derive->add_option("--g1", cfg.phys.g1, "probe coupling [rad/s]")->required();
  derive->add_option("--g2", cfg.phys.g2, "pump coupling [rad/s]")->required();
  derive->add_option("--atoms", cfg.phys.n_atoms, "atom count")->required();
  double a2_re = 0.0, a2_im = 0.0;
  derive->add_option("--a2-re", a2_re, "Re a2(0)")->required();
  derive->add_option("--a2-im", a2_im, "Im a2(0)");
  add_common(derive, cfg);

  auto* zerot = app.add_subcommand("zerot", "zero-T threshold and closed-form growth table");
  zerot->add_option("--alpha", cfg.alpha, "coupling for the growth columns");
  add_delta_axis(zerot, cfg);
  add_common(zerot, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  cfg.phys.a2_0 = carl::Complex(a2_re, a2_im);
  if (sweep->parsed()) cfg.command = "sweep";
  if (map->parsed()) cfg.command = "map";
  if (sim->parsed()) cfg.command = "simulate";
  if (derive->parsed()) cfg.command = "derive";
  if (zerot->parsed()) cfg.command = "zerot";

  try {
    carl::run_command(cfg);
  } catch (const carl::NumericalDiagnostic& e) {
    std::cerr << "numerical diagnostic: " << e.what() << " (delta = " << e.delta() << ")\n";
    return 2;
  } catch (const carl::IntegrationAbort& e) {
    std::cerr << "integration abort: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
