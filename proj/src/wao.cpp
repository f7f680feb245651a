#include "carl/wao.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "carl/ode.hpp"

namespace carl {

namespace {
constexpr Complex kI(0.0, 1.0);
constexpr double kBoundaryTol = 1e-8;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

MomentumLattice::MomentumLattice(int kmin, int kmax, double off)
    : kappa_min(kmin), kappa_max(kmax), offset(off) {
  if (kappa_max - kappa_min < 2)
    throw std::domain_error("MomentumLattice: need kappa_max - kappa_min >= 2");
  if (!(offset >= 0.0) || !(offset < 1.0))
    throw std::domain_error("MomentumLattice: offset must lie in [0, 1)");
}

DensityState DensityState::plus(double c, const DensityState& d) const {
  DensityState out;
  out.lattice = lattice;
  out.rho = rho + c * d.rho;
  out.probe = probe + c * d.probe;
  out.tau = tau + c * d.tau;
  return out;
}

CoherenceState CoherenceState::plus(double c, const CoherenceState& d) const {
  CoherenceState out;
  out.kappa = kappa;
  out.dweight = dweight;
  out.drho = drho + c * d.drho;
  out.probe = probe + c * d.probe;
  out.tau = tau + c * d.tau;
  return out;
}

OscillatorState OscillatorState::plus(double c, const OscillatorState& d) const {
  return OscillatorState{b + c * d.b, b_dot + c * d.b_dot, probe + c * d.probe, tau + c * d.tau};
}

DensityState init_thermal_density(const MomentumLattice& lattice, const ThermalSpec& thermal) {
  DensityState st;
  st.lattice = lattice;
  const int n = lattice.size();
  st.rho = Eigen::MatrixXcd::Zero(n, n);
  if (thermal.is_zero()) {
    // all weight on the site closest to kappa = 0
    int i0 = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(lattice.kappa(i)) < std::abs(lattice.kappa(i0))) i0 = i;
    st.rho(i0, i0) = 1.0;
    return st;
  }
  const double beta = thermal.beta();
  double in_range = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k = lattice.kappa(i);
    const double w = std::exp(-4.0 * beta * beta * k * k);
    st.rho(i, i) = w;
    in_range += w;
  }
  // weight of the same offset family outside the lattice
  double tail = 0.0;
  for (int m = 1; m <= 64; ++m) {
    const double klo = lattice.kappa(0) - m;
    const double khi = lattice.kappa(n - 1) + m;
    tail += std::exp(-4.0 * beta * beta * klo * klo) + std::exp(-4.0 * beta * beta * khi * khi);
  }
  if (tail / (in_range + tail) > 1e-10) {
    const int needed = std::max(4, static_cast<int>(std::ceil(2.4 / beta)));
    throw std::domain_error(
        "init_thermal_density: lattice too narrow for the thermal tail; need half-width >= " +
        std::to_string(needed));
  }
  st.rho /= in_range;  // trace exactly 1 after truncation
  return st;
}

DensityState wao_nonlinear_rhs(const DensityState& state, const ControlParams& c) {
  const int n = state.lattice.size();
  const Eigen::MatrixXcd& r = state.rho;
  DensityState d;
  d.lattice = state.lattice;
  d.rho = Eigen::MatrixXcd::Zero(n, n);

  // kinetic phases -i (kappa^2 - kappa'^2) rho
  Eigen::ArrayXd k2(n);
  for (int i = 0; i < n; ++i) {
    const double k = state.lattice.kappa(i);
    k2[i] = k * k;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d.rho(i, j) = -kI * (k2[i] - k2[j]) * r(i, j);

  // recoil couplings; out-of-lattice entries are zero
  const Complex half_ac = 0.5 * kI * std::conj(state.probe);
  const Complex half_a = 0.5 * kI * state.probe;
  // + (i/2) A^* [rho(kappa, kappa'+1) - rho(kappa-1, kappa')]
  d.rho.leftCols(n - 1) += half_ac * r.rightCols(n - 1);
  d.rho.bottomRows(n - 1) -= half_ac * r.topRows(n - 1);
  // - (i/2) A [rho(kappa+1, kappa') - rho(kappa, kappa'-1)]
  d.rho.topRows(n - 1) -= half_a * r.bottomRows(n - 1);
  d.rho.rightCols(n - 1) += half_a * r.leftCols(n - 1);

  d.probe = kI * c.delta * state.probe - kI * c.alpha * wao_bunching(state);
  d.tau = 1.0;
  return d;
}

CoherenceState wao_linearized_rhs(const CoherenceState& state, const ControlParams& c) {
  CoherenceState d;
  d.kappa = state.kappa;
  d.dweight = state.dweight;
  d.drho = kI * (2.0 * state.kappa + 1.0) * state.drho -
           kI * state.dweight.cast<Complex>() * state.probe;
  d.probe = kI * c.delta * state.probe - kI * c.alpha * state.drho.sum();
  d.tau = 1.0;
  return d;
}

OscillatorState zero_t_oscillator_rhs(const OscillatorState& state, Model model,
                                      const ControlParams& c) {
  OscillatorState d;
  d.b = state.b_dot;
  d.b_dot = model == Model::Wao ? -state.b - state.probe : -state.probe;
  d.probe = kI * (c.delta * state.probe - c.alpha * state.b);
  d.tau = 1.0;
  return d;
}

CoherenceState make_coherence_state(const ThermalSpec& thermal, int half_width, int n_families,
                                    Complex probe0) {
  CoherenceState st;
  st.probe = probe0;
  st.tau = 0.0;
  if (thermal.is_zero()) {
    // N(kappa)/N = delta_{kappa,0}: only delta_rho(-1,0) and delta_rho(0,1)
    // couple to the probe.
    st.kappa = Eigen::ArrayXd(2);
    st.kappa << -1.0, 0.0;
    st.dweight = Eigen::ArrayXd(2);
    st.dweight << 0.5, -0.5;
    st.drho = Eigen::ArrayXcd::Zero(2);
    return st;
  }
  if (half_width < 2) throw std::domain_error("make_coherence_state: half_width must be >= 2");
  if (n_families < 1) throw std::domain_error("make_coherence_state: n_families must be >= 1");
  const double beta = thermal.beta();
  const int sites = 2 * half_width + 1;
  const int per_family = sites - 1;

  // site weights across all families, normalized jointly
  Eigen::ArrayXd weights(n_families * sites);
  for (int f = 0; f < n_families; ++f) {
    const double off = n_families == 1 ? 0.0 : (f + 0.5) / n_families - 0.5;
    for (int i = 0; i < sites; ++i) {
      const double k = off + (i - half_width);
      weights[f * sites + i] = std::exp(-4.0 * beta * beta * k * k);
    }
  }
  weights /= weights.sum();

  st.kappa.resize(n_families * per_family);
  st.dweight.resize(n_families * per_family);
  st.drho = Eigen::ArrayXcd::Zero(n_families * per_family);
  for (int f = 0; f < n_families; ++f) {
    const double off = n_families == 1 ? 0.0 : (f + 0.5) / n_families - 0.5;
    for (int i = 0; i < per_family; ++i) {
      st.kappa[f * per_family + i] = off + (i - half_width);
      st.dweight[f * per_family + i] =
          0.5 * (weights[f * sites + i + 1] - weights[f * sites + i]);
    }
  }
  return st;
}

Complex wao_bunching(const DensityState& state) {
  const int n = state.lattice.size();
  Complex b = 0.0;
  for (int i = 0; i + 1 < n; ++i) b += state.rho(i, i + 1);
  return b;
}

double wao_trace(const DensityState& state) { return state.rho.trace().real(); }

double wao_hermiticity_error(const DensityState& state) {
  return (state.rho - state.rho.adjoint()).cwiseAbs().maxCoeff();
}

double wao_conserved(const DensityState& state, const ControlParams& c) {
  if (!(c.alpha > 0.0)) throw std::domain_error("wao_conserved: undefined for alpha = 0");
  double mom = 0.0;
  for (int i = 0; i < state.lattice.size(); ++i)
    mom += state.lattice.kappa(i) * state.rho(i, i).real();
  return mom - std::norm(state.probe) / (2.0 * c.alpha);
}

std::vector<WaoRow> integrate_density(DensityState& state, const ControlParams& c, double dt,
                                      std::int64_t n_steps, std::int64_t stride) {
  if (!(dt > 0.0)) throw std::domain_error("integrate_density: dt must be positive");
  if (stride < 1) stride = 1;
  const bool has_conserved = c.alpha > 0.0;
  const int n = state.lattice.size();
  const auto observe = [&](const DensityState& s) {
    WaoRow row;
    row.tau = s.tau;
    row.probe = s.probe;
    row.bunching = wao_bunching(s);
    row.trace = wao_trace(s);
    row.hermiticity_error = wao_hermiticity_error(s);
    row.conserved = has_conserved ? wao_conserved(s, c) : kNaN;
    return row;
  };
  std::vector<WaoRow> traj;
  traj.reserve(static_cast<std::size_t>(n_steps / stride) + 2);
  traj.push_back(observe(state));
  for (std::int64_t step = 1; step <= n_steps; ++step) {
    state = rk4_step(state, dt, [&c](const DensityState& s) { return wao_nonlinear_rhs(s, c); });
    if (!std::isfinite(state.probe.real()) || !std::isfinite(state.probe.imag()))
      throw IntegrationAbort("integrate_density: non-finite probe", step);
    const double edge =
        std::max(std::abs(state.rho(0, 0).real()), std::abs(state.rho(n - 1, n - 1).real()));
    if (edge > kBoundaryTol)
      throw IntegrationAbort("integrate_density: lattice too small (boundary occupancy " +
                                 std::to_string(edge) + ")",
                             step);
    if (step % stride == 0 || step == n_steps) traj.push_back(observe(state));
  }
  return traj;
}

Trajectory integrate_coherence(CoherenceState& state, const ControlParams& c, double dt,
                               std::int64_t n_steps, std::int64_t stride) {
  if (!(dt > 0.0)) throw std::domain_error("integrate_coherence: dt must be positive");
  if (stride < 1) stride = 1;
  const auto observe = [](const CoherenceState& s) {
    TrajectoryRow row;
    row.tau = s.tau;
    row.probe = s.probe;
    row.bunching = s.drho.sum();
    row.conserved = kNaN;
    return row;
  };
  Trajectory traj;
  traj.reserve(static_cast<std::size_t>(n_steps / stride) + 2);
  traj.push_back(observe(state));
  for (std::int64_t step = 1; step <= n_steps; ++step) {
    state = rk4_step(state, dt, [&c](const CoherenceState& s) { return wao_linearized_rhs(s, c); });
    if (!std::isfinite(state.probe.real()) || !std::isfinite(state.probe.imag()))
      throw IntegrationAbort("integrate_coherence: non-finite probe", step);
    if (step % stride == 0 || step == n_steps) traj.push_back(observe(state));
  }
  return traj;
}

Trajectory integrate_oscillator(OscillatorState& state, Model model, const ControlParams& c,
                                double dt, std::int64_t n_steps, std::int64_t stride) {
  if (!(dt > 0.0)) throw std::domain_error("integrate_oscillator: dt must be positive");
  if (stride < 1) stride = 1;
  const auto observe = [](const OscillatorState& s) {
    TrajectoryRow row;
    row.tau = s.tau;
    row.probe = s.probe;
    row.bunching = s.b;
    row.conserved = kNaN;
    return row;
  };
  Trajectory traj;
  traj.reserve(static_cast<std::size_t>(n_steps / stride) + 2);
  traj.push_back(observe(state));
  for (std::int64_t step = 1; step <= n_steps; ++step) {
    state = rk4_step(state, dt,
                     [&](const OscillatorState& s) { return zero_t_oscillator_rhs(s, model, c); });
    if (!std::isfinite(state.probe.real()) || !std::isfinite(state.probe.imag()))
      throw IntegrationAbort("integrate_oscillator: non-finite probe", step);
    if (step % stride == 0 || step == n_steps) traj.push_back(observe(state));
  }
  return traj;
}

}  // namespace carl
