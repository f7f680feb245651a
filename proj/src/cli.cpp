#include "carl/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "carl/dispersion.hpp"
#include "carl/ode.hpp"
#include "carl/rao.hpp"
#include "carl/version.hpp"
#include "carl/wao.hpp"

namespace carl {

namespace {

class CsvFile {
 public:
  explicit CsvFile(const std::string& path) : path_(path) {
    if (path_ != "-") {
      file_.open(path_, std::ios::binary | std::ios::trunc);
      if (!file_) throw std::domain_error("cannot open output file: " + path_);
    }
  }
  std::ostream& out() { return path_ == "-" ? std::cout : file_; }
  void meta(const std::string& key, const std::string& value) {
    out() << "# " << key << " = " << value << "\n";
  }
  void line(const std::string& s) { out() << s << "\n"; }

 private:
  std::string path_;
  std::ofstream file_;
};

std::string opt_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::string nan_cell(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

void common_header(CsvFile& f, const RunConfig& cfg) {
  f.meta("carl", kVersion);
  f.meta("command", cfg.command);
}

struct SweepInputs {
  double dmin, dmax;
  int points;
};

SweepInputs sweep_axis(const RunConfig& cfg) {
  if (cfg.delta) return {*cfg.delta, *cfg.delta, 1};
  if (cfg.points < 2) throw std::domain_error("sweep: points must be >= 2");
  if (!(cfg.delta_max > cfg.delta_min)) throw std::domain_error("sweep: empty delta range");
  return {cfg.delta_min, cfg.delta_max, cfg.points};
}

std::optional<double> point_gamma(Model m, double delta, double alpha,
                                  const ThermalSpec& thermal) {
  auto r = find_unstable_root(m, ControlParams(delta, alpha), thermal);
  if (r) return r->gamma;
  return std::nullopt;
}

// One sweep over the delta axis for the requested models.
void write_sweep_file(const RunConfig& cfg, const std::string& path, const ThermalSpec& thermal,
                      const std::string& temp_label, double alpha) {
  const SweepInputs ax = sweep_axis(cfg);
  const bool do_rao = cfg.model == "both" || cfg.model == "rao";
  const bool do_wao = cfg.model == "both" || cfg.model == "wao";

  std::vector<std::optional<double>> g_rao(ax.points), g_wao(ax.points);
  if (ax.points == 1) {
    if (do_rao) g_rao[0] = point_gamma(Model::Rao, ax.dmin, alpha, thermal);
    if (do_wao) g_wao[0] = point_gamma(Model::Wao, ax.dmin, alpha, thermal);
  } else {
    if (do_rao) {
      auto c = sweep_growth_rate(Model::Rao, alpha, thermal, ax.dmin, ax.dmax, ax.points);
      for (int i = 0; i < ax.points; ++i) g_rao[i] = c.points[i].gamma;
    }
    if (do_wao) {
      auto c = sweep_growth_rate(Model::Wao, alpha, thermal, ax.dmin, ax.dmax, ax.points);
      for (int i = 0; i < ax.points; ++i) g_wao[i] = c.points[i].gamma;
    }
  }

  CsvFile f(path);
  common_header(f, cfg);
  f.meta("model", cfg.model);
  f.meta("alpha", format_double(alpha));
  f.meta("temp", temp_label);
  f.meta("delta_min", format_double(ax.dmin));
  f.meta("delta_max", format_double(ax.dmax));
  f.meta("points", std::to_string(ax.points));
  f.line("delta,gamma_rao,gamma_wao");
  for (int i = 0; i < ax.points; ++i) {
    const double d =
        ax.points == 1 ? ax.dmin : ax.dmin + (ax.dmax - ax.dmin) * i / (ax.points - 1);
    f.line(format_double(d) + "," + opt_cell(g_rao[i]) + "," + opt_cell(g_wao[i]));
  }
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  if (path == "-") return path;
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || path.find('/', dot) != std::string::npos)
    return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

void cmd_sweep(const RunConfig& cfg) {
  if (cfg.figure == 1 || cfg.figure == 2) {
    // Fig. 1: alpha = 10; Fig. 2: alpha = 1e-1; panels T = 0, T_R, 10 T_R, 100 T_R.
    RunConfig preset = cfg;
    preset.alpha = cfg.figure == 1 ? 10.0 : 0.1;
    if (!cfg.delta) {
      preset.delta_min = cfg.figure == 1 ? -10.0 : -2.0;
      preset.delta_max = cfg.figure == 1 ? 10.0 : 3.0;
      preset.points = 400;
    }
    const std::pair<std::string, std::string> panels[] = {
        {"zero", "_T0"}, {"1", "_TR"}, {"10", "_T10TR"}, {"100", "_T100TR"}};
    for (const auto& [temp, suffix] : panels) {
      preset.temp = temp;
      write_sweep_file(preset, with_suffix(cfg.output, suffix), parse_thermal(temp), temp,
                       preset.alpha);
    }
    return;
  }
  write_sweep_file(cfg, cfg.output, parse_thermal(cfg.temp), cfg.temp, cfg.alpha);
}

void cmd_map(const RunConfig& cfg) {
  RunConfig rc = cfg;
  if (cfg.figure == 3) {
    rc.delta_min = -3.0;
    rc.delta_max = 3.0;
    rc.points = 200;
    rc.alpha_min = 0.0;
    rc.alpha_max = 3.0;
    rc.alpha_points = 200;
    rc.temp = "zero";
  }
  if (rc.points < 2 || rc.alpha_points < 2) throw std::domain_error("map: grids need >= 2 points");
  const ThermalSpec thermal = parse_thermal(rc.temp);
  const int workers = resolve_workers(rc.workers);

  Eigen::VectorXd dgrid(rc.points), agrid(rc.alpha_points);
  for (int j = 0; j < rc.points; ++j)
    dgrid[j] = rc.delta_min + (rc.delta_max - rc.delta_min) * j / (rc.points - 1);
  for (int i = 0; i < rc.alpha_points; ++i)
    agrid[i] = rc.alpha_min + (rc.alpha_max - rc.alpha_min) * i / (rc.alpha_points - 1);

  const bool do_rao = rc.model == "both" || rc.model == "rao";
  const bool do_wao = rc.model == "both" || rc.model == "wao";
  std::optional<StabilityMap> mr, mw;
  if (do_rao) mr = stability_map(Model::Rao, thermal, dgrid, agrid, workers);
  if (do_wao) mw = stability_map(Model::Wao, thermal, dgrid, agrid, workers);

  CsvFile f(rc.output);
  common_header(f, cfg);
  f.meta("model", rc.model);
  f.meta("temp", rc.temp);
  f.meta("delta_min", format_double(rc.delta_min));
  f.meta("delta_max", format_double(rc.delta_max));
  f.meta("delta_points", std::to_string(rc.points));
  f.meta("alpha_min", format_double(rc.alpha_min));
  f.meta("alpha_max", format_double(rc.alpha_max));
  f.meta("alpha_points", std::to_string(rc.alpha_points));
  f.meta("workers", std::to_string(workers));
  std::string header = "delta,alpha";
  if (do_rao) header += ",unstable_rao,gamma_rao";
  if (do_wao) header += ",unstable_wao,gamma_wao";
  header += ",threshold_rao,threshold_wao";
  f.line(header);
  for (int i = 0; i < rc.alpha_points; ++i)
    for (int j = 0; j < rc.points; ++j) {
      std::string row = format_double(dgrid[j]) + "," + format_double(agrid[i]);
      if (do_rao)
        row += std::string(",") + (mr->unstable(i, j) ? "1" : "0") + "," +
               format_double(mr->gamma(i, j));
      if (do_wao)
        row += std::string(",") + (mw->unstable(i, j) ? "1" : "0") + "," +
               format_double(mw->gamma(i, j));
      row += "," + format_double(threshold(Model::Rao, dgrid[j])) + "," +
             format_double(threshold(Model::Wao, dgrid[j]));
      f.line(row);
    }
}

void cmd_simulate(const RunConfig& cfg) {
  if (cfg.model != "rao" && cfg.model != "wao")
    throw std::domain_error("simulate: --model must be rao or wao");
  const Model model = cfg.model == "rao" ? Model::Rao : Model::Wao;
  const ThermalSpec thermal = parse_thermal(cfg.temp);
  const double delta = cfg.delta.value_or(0.0);
  const ControlParams control(delta, cfg.alpha);

  CsvFile f(cfg.output);
  common_header(f, cfg);
  f.meta("model", cfg.model);
  f.meta("dynamics", cfg.dynamics);
  f.meta("alpha", format_double(cfg.alpha));
  f.meta("delta", format_double(delta));
  f.meta("temp", cfg.temp);
  f.meta("dt", format_double(cfg.dt));
  f.meta("n_steps", std::to_string(cfg.n_steps));
  f.meta("stride", std::to_string(cfg.stride));
  f.meta("probe0", format_double(cfg.probe0));
  f.meta("seed", std::to_string(cfg.seed));

  std::vector<std::pair<double, double>> series;
  const Complex probe0(cfg.probe0, 0.0);

  if (cfg.dynamics == "nonlinear" && model == Model::Rao) {
    f.meta("n_particles", std::to_string(cfg.n_particles));
    f.meta("quiet_start", cfg.quiet_start ? "1" : "0");
    Ensemble st = init_ensemble(cfg.n_particles, thermal, cfg.seed, probe0, cfg.quiet_start);
    const auto traj = integrate_ensemble(st, control, cfg.dt, cfg.n_steps, cfg.stride);
    f.line("tau,re_a,im_a,abs_a,re_b,im_b,conserved");
    for (const auto& r : traj) {
      f.line(format_double(r.tau) + "," + format_double(r.probe.real()) + "," +
             format_double(r.probe.imag()) + "," + format_double(std::abs(r.probe)) + "," +
             format_double(r.bunching.real()) + "," + format_double(r.bunching.imag()) + "," +
             nan_cell(r.conserved));
    }
    series = probe_magnitude_series(traj);
  } else if (cfg.dynamics == "nonlinear") {
    f.meta("half_width", std::to_string(cfg.half_width));
    f.meta("families", std::to_string(cfg.families));
    // Finite-T nonlinear runs decouple into fractional-offset families that
    // share the probe; each extra family refines the thermal discretization.
    std::vector<DensityState> blocks;
    std::vector<double> block_weight;
    if (thermal.is_zero() || cfg.families <= 1) {
      blocks.push_back(init_thermal_density(MomentumLattice::symmetric(cfg.half_width), thermal));
      block_weight.push_back(1.0);
    } else {
      double total = 0.0;
      for (int fam = 0; fam < cfg.families; ++fam) {
        const double off = (fam + 0.5) / cfg.families - 0.5;
        const double shifted_off = off < 0.0 ? off + 1.0 : off;
        MomentumLattice lat(-cfg.half_width - 1, cfg.half_width, shifted_off);
        DensityState st = init_thermal_density(lat, thermal);
        double mass = 0.0;
        const double beta = thermal.beta();
        for (int i = 0; i < lat.size(); ++i) {
          const double k = lat.kappa(i);
          mass += std::exp(-4.0 * beta * beta * k * k);
        }
        blocks.push_back(std::move(st));
        block_weight.push_back(mass);
        total += mass;
      }
      for (auto& w : block_weight) w /= total;
    }
    for (auto& b : blocks) b.probe = probe0;
    // shared-probe RK4 across blocks
    f.line("tau,re_a,im_a,abs_a,re_b,im_b,trace,hermiticity_error,conserved");
    Complex probe = probe0;
    double tau = 0.0;
    const auto emit = [&]() {
      Complex b_tot = 0.0;
      double trace = 0.0, herm = 0.0, conserved = 0.0;
      for (std::size_t k = 0; k < blocks.size(); ++k) {
        b_tot += block_weight[k] * wao_bunching(blocks[k]);
        trace += block_weight[k] * wao_trace(blocks[k]);
        herm = std::max(herm, wao_hermiticity_error(blocks[k]));
        for (int i = 0; i < blocks[k].lattice.size(); ++i)
          conserved += block_weight[k] * blocks[k].lattice.kappa(i) * blocks[k].rho(i, i).real();
      }
      if (control.alpha > 0.0)
        conserved -= std::norm(probe) / (2.0 * control.alpha);
      else
        conserved = std::numeric_limits<double>::quiet_NaN();
      f.line(format_double(tau) + "," + format_double(probe.real()) + "," +
             format_double(probe.imag()) + "," + format_double(std::abs(probe)) + "," +
             format_double(b_tot.real()) + "," + format_double(b_tot.imag()) + "," +
             format_double(trace) + "," + format_double(herm) + "," + nan_cell(conserved));
      series.emplace_back(tau, std::abs(probe));
    };
    emit();
    // weighted-probe rhs: dA = i Delta A - i alpha sum_fam w_fam B_fam
    struct MultiState {
      std::vector<Eigen::MatrixXcd> rho;
      Complex probe;
      double tau;
    };
    const auto deriv = [&](const MultiState& ms) {
      MultiState d;
      d.rho.resize(ms.rho.size());
      Complex b_tot = 0.0;
      for (std::size_t k = 0; k < blocks.size(); ++k) {
        DensityState tmp = blocks[k];
        tmp.rho = ms.rho[k];
        tmp.probe = ms.probe;
        tmp.tau = ms.tau;
        DensityState dd = wao_nonlinear_rhs(tmp, ControlParams(control.delta, 0.0));
        d.rho[k] = dd.rho;
        b_tot += block_weight[k] * wao_bunching(tmp);
      }
      d.probe = Complex(0.0, 1.0) * control.delta * ms.probe -
                Complex(0.0, 1.0) * control.alpha * b_tot;
      d.tau = 1.0;
      return d;
    };
    const auto plus = [](const MultiState& y, double c, const MultiState& d) {
      MultiState out;
      out.rho.resize(y.rho.size());
      for (std::size_t k = 0; k < y.rho.size(); ++k) out.rho[k] = y.rho[k] + c * d.rho[k];
      out.probe = y.probe + c * d.probe;
      out.tau = y.tau + c * d.tau;
      return out;
    };
    MultiState ms;
    ms.probe = probe0;
    ms.tau = 0.0;
    for (const auto& b : blocks) ms.rho.push_back(b.rho);
    for (std::int64_t step = 1; step <= cfg.n_steps; ++step) {
      const MultiState k1 = deriv(ms);
      const MultiState k2 = deriv(plus(ms, 0.5 * cfg.dt, k1));
      const MultiState k3 = deriv(plus(ms, 0.5 * cfg.dt, k2));
      const MultiState k4 = deriv(plus(ms, cfg.dt, k3));
      ms = plus(ms, cfg.dt / 6.0, plus(plus(plus(k1, 2.0, k2), 2.0, k3), 1.0, k4));
      if (!std::isfinite(ms.probe.real()))
        throw IntegrationAbort("simulate: non-finite probe", step);
      for (std::size_t k = 0; k < blocks.size(); ++k) {
        blocks[k].rho = ms.rho[k];
        blocks[k].probe = ms.probe;
        blocks[k].tau = ms.tau;
        const int nb = blocks[k].lattice.size();
        const double edge = std::max(std::abs(blocks[k].rho(0, 0).real()),
                                     std::abs(blocks[k].rho(nb - 1, nb - 1).real()));
        if (edge > 1e-8)
          throw IntegrationAbort("simulate: lattice too small (boundary occupancy)", step);
      }
      probe = ms.probe;
      tau = ms.tau;
      if (step % cfg.stride == 0 || step == cfg.n_steps) emit();
    }
  } else if (cfg.dynamics == "linearized" && model == Model::Rao) {
    f.meta("groups", std::to_string(std::max<std::int64_t>(cfg.n_particles, 2)));
    VelocityGroupState st = init_velocity_groups(
        thermal, thermal.is_zero() ? 1 : std::max<std::int64_t>(cfg.n_particles, 2), probe0);
    const auto traj = integrate_velocity_groups(st, control, cfg.dt, cfg.n_steps, cfg.stride);
    f.line("tau,re_a,im_a,abs_a,re_b,im_b,conserved");
    for (const auto& r : traj)
      f.line(format_double(r.tau) + "," + format_double(r.probe.real()) + "," +
             format_double(r.probe.imag()) + "," + format_double(std::abs(r.probe)) + "," +
             format_double(r.bunching.real()) + "," + format_double(r.bunching.imag()) + ",");
    series = probe_magnitude_series(traj);
  } else if (cfg.dynamics == "linearized") {
    f.meta("half_width", std::to_string(cfg.half_width));
    f.meta("families", std::to_string(cfg.families));
    CoherenceState st = make_coherence_state(thermal, cfg.half_width, cfg.families, probe0);
    const auto traj = integrate_coherence(st, control, cfg.dt, cfg.n_steps, cfg.stride);
    f.line("tau,re_a,im_a,abs_a,re_b,im_b,conserved");
    for (const auto& r : traj)
      f.line(format_double(r.tau) + "," + format_double(r.probe.real()) + "," +
             format_double(r.probe.imag()) + "," + format_double(std::abs(r.probe)) + "," +
             format_double(r.bunching.real()) + "," + format_double(r.bunching.imag()) + ",");
    series = probe_magnitude_series(traj);
  } else if (cfg.dynamics == "oscillator") {
    OscillatorState st;
    st.probe = probe0;
    const auto traj = integrate_oscillator(st, model, control, cfg.dt, cfg.n_steps, cfg.stride);
    f.line("tau,re_a,im_a,abs_a,re_b,im_b,conserved");
    for (const auto& r : traj)
      f.line(format_double(r.tau) + "," + format_double(r.probe.real()) + "," +
             format_double(r.probe.imag()) + "," + format_double(std::abs(r.probe)) + "," +
             format_double(r.bunching.real()) + "," + format_double(r.bunching.imag()) + ",");
    series = probe_magnitude_series(traj);
  } else {
    throw std::domain_error("simulate: unknown dynamics '" + cfg.dynamics + "'");
  }

  // summary: fitted growth against the dispersion prediction
  std::string fit_msg, disp_msg, dev_msg;
  std::optional<double> fit;
  try {
    fit = fit_growth_rate(series).gamma;
    fit_msg = format_double(*fit);
  } catch (const std::runtime_error& e) {
    fit_msg = e.what();
  }
  const auto pred = find_unstable_root(model, control, thermal);
  disp_msg = pred ? format_double(pred->gamma) : "stable";
  if (fit && pred)
    dev_msg = format_double(std::abs(*fit - pred->gamma) / pred->gamma);
  f.line("# gamma_fit = " + fit_msg);
  f.line("# gamma_dispersion = " + disp_msg);
  if (!dev_msg.empty()) f.line("# relative_deviation = " + dev_msg);
  if (cfg.output != "-") {
    std::cout << "gamma_fit = " << fit_msg << "\n"
              << "gamma_dispersion = " << disp_msg << "\n";
    if (!dev_msg.empty()) std::cout << "relative_deviation = " << dev_msg << "\n";
  }
}

void cmd_derive(const RunConfig& cfg) {
  const DerivedParams d = derive_control_params(cfg.phys);
  CsvFile f(cfg.output);
  common_header(f, cfg);
  f.meta("mass", format_double(cfg.phys.mass));
  f.meta("k1", format_double(cfg.phys.k1));
  f.meta("k2", format_double(cfg.phys.k2));
  f.meta("omega0", format_double(cfg.phys.omega0));
  f.meta("omega1", format_double(cfg.phys.omega1));
  f.meta("omega2", format_double(cfg.phys.omega2));
  f.meta("g1", format_double(cfg.phys.g1));
  f.meta("g2", format_double(cfg.phys.g2));
  f.meta("atoms", std::to_string(cfg.phys.n_atoms));
  f.meta("a2_re", format_double(cfg.phys.a2_0.real()));
  f.meta("a2_im", format_double(cfg.phys.a2_0.imag()));
  f.line("quantity,value");
  f.line("delta," + format_double(d.control.delta));
  f.line("alpha," + format_double(d.control.alpha));
  f.line("omega_r," + format_double(d.omega_r));
  f.line("recoil_temperature," + format_double(d.recoil_temp));
  f.line("pulled_omega," + format_double(d.pulled.omega));
  f.line(std::string("branch,") +
         (d.pulled.branch == DetuningBranch::Positive ? "positive" : "negative"));
  for (const auto& w : d.warnings) f.line("# warning: " + w);
}

void cmd_zerot(const RunConfig& cfg) {
  const SweepInputs ax = sweep_axis(cfg);
  CsvFile f(cfg.output);
  common_header(f, cfg);
  f.meta("alpha", format_double(cfg.alpha));
  f.meta("delta_min", format_double(ax.dmin));
  f.meta("delta_max", format_double(ax.dmax));
  f.meta("points", std::to_string(ax.points));
  f.line("delta,threshold_rao,threshold_wao,gamma_rao,gamma_wao");
  for (int i = 0; i < ax.points; ++i) {
    const double d =
        ax.points == 1 ? ax.dmin : ax.dmin + (ax.dmax - ax.dmin) * i / (ax.points - 1);
    const auto gr = gamma_closed_form(Model::Rao, ControlParams(d, cfg.alpha));
    const auto gw = gamma_closed_form(Model::Wao, ControlParams(d, cfg.alpha));
    f.line(format_double(d) + "," + format_double(threshold(Model::Rao, d)) + "," +
           format_double(threshold(Model::Wao, d)) + "," + opt_cell(gr) + "," + opt_cell(gw));
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

ThermalSpec parse_thermal(const std::string& temp) {
  if (temp == "zero" || temp == "0") return ThermalSpec::zero();
  std::size_t pos = 0;
  double ratio = 0.0;
  try {
    ratio = std::stod(temp, &pos);
  } catch (const std::exception&) {
    throw std::domain_error("temp must be 'zero' or a positive T/T_R ratio, got '" + temp + "'");
  }
  if (pos != temp.size() || !(ratio > 0.0))
    throw std::domain_error("temp must be 'zero' or a positive T/T_R ratio, got '" + temp + "'");
  return ThermalSpec::finite(1.0 / std::sqrt(ratio));
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CARL_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(8u, hw == 0 ? 1u : hw));
}

void run_command(const RunConfig& cfg) {
  if (cfg.command == "sweep")
    cmd_sweep(cfg);
  else if (cfg.command == "map")
    cmd_map(cfg);
  else if (cfg.command == "simulate")
    cmd_simulate(cfg);
  else if (cfg.command == "derive")
    cmd_derive(cfg);
  else if (cfg.command == "zerot")
    cmd_zerot(cfg);
  else
    throw std::domain_error("unknown command: " + cfg.command);
}

}  // namespace carl
