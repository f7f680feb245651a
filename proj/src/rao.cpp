#include "carl/rao.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "carl/ode.hpp"
#include "carl/rng.hpp"

namespace carl {

namespace {
constexpr Complex kI(0.0, 1.0);
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

Ensemble Ensemble::plus(double c, const Ensemble& d) const {
  Ensemble out;
  out.theta = theta + c * d.theta;
  out.momentum = momentum + c * d.momentum;
  out.probe = probe + c * d.probe;
  out.tau = tau + c * d.tau;
  return out;
}

VelocityGroupState VelocityGroupState::plus(double c, const VelocityGroupState& d) const {
  VelocityGroupState out;
  out.group_momentum = group_momentum;  // group labels are constant
  out.weight = weight;
  out.bunching = bunching + c * d.bunching;
  out.pi = pi + c * d.pi;
  out.probe = probe + c * d.probe;
  out.tau = tau + c * d.tau;
  return out;
}

Complex bunching(const Ensemble& state) {
  if (state.size() < 1) throw std::domain_error("bunching: empty ensemble");
  const double n = static_cast<double>(state.size());
  return Complex(state.theta.cos().sum() / n, -state.theta.sin().sum() / n);
}

Ensemble rao_nonlinear_rhs(const Ensemble& state, const ControlParams& c) {
  Ensemble d;
  d.theta = state.momentum;
  // -i A e^{i theta} + c.c. = 2 Im(A e^{i theta}), manifestly real.
  const Eigen::ArrayXd cos_t = state.theta.cos();
  const Eigen::ArrayXd sin_t = state.theta.sin();
  d.momentum = 2.0 * (state.probe.real() * sin_t + state.probe.imag() * cos_t);
  const double n = static_cast<double>(state.size());
  const Complex b(cos_t.sum() / n, -sin_t.sum() / n);
  d.probe = kI * c.delta * state.probe - kI * c.alpha * b;
  d.tau = 1.0;
  return d;
}

VelocityGroupState rao_linearized_rhs(const VelocityGroupState& state, const ControlParams& c) {
  VelocityGroupState d;
  d.group_momentum = state.group_momentum;
  d.weight = state.weight;
  d.bunching = -kI * state.pi;
  d.pi = kI * (state.group_momentum.square() * state.bunching -
               2.0 * state.group_momentum * state.pi - state.weight * state.probe);
  d.probe = kI * (c.delta * state.probe - c.alpha * state.bunching.sum());
  d.tau = 1.0;
  return d;
}

double conserved_quantity(const Ensemble& state, const ControlParams& c) {
  if (!(c.alpha > 0.0))
    throw std::domain_error("conserved_quantity: undefined for alpha = 0");
  return state.momentum.mean() + std::norm(state.probe) / c.alpha;
}

Ensemble init_ensemble(std::int64_t n, const ThermalSpec& thermal, std::uint64_t seed,
                       Complex probe0, bool quiet_start) {
  if (n < 1) throw std::domain_error("init_ensemble: n must be >= 1");
  Ensemble st;
  st.theta.resize(n);
  if (quiet_start) {
    for (std::int64_t j = 0; j < n; ++j)
      st.theta[j] = 2.0 * constants::pi * static_cast<double>(j) / static_cast<double>(n);
  } else {
    for (std::int64_t j = 0; j < n; ++j)
      st.theta[j] = 2.0 * constants::pi * rng::uniform_at(seed ^ 0x5bf03635ULL,
                                                          static_cast<std::uint64_t>(j));
  }
  st.momentum = sample_momenta(n, thermal, seed);
  st.probe = probe0;
  st.tau = 0.0;
  return st;
}

VelocityGroupState init_velocity_groups(const ThermalSpec& thermal, std::uint64_t n_groups,
                                        Complex probe0) {
  VelocityGroupState st;
  if (thermal.is_zero()) {
    st.group_momentum = Eigen::ArrayXd::Zero(1);
    st.weight = Eigen::ArrayXd::Ones(1);
  } else {
    if (n_groups < 2) throw std::domain_error("init_velocity_groups: need >= 2 groups");
    const double beta = thermal.beta();
    const double sigma_p = 1.0 / (beta * std::sqrt(2.0));
    const double lim = 4.5 * sigma_p;
    const std::int64_t n = static_cast<std::int64_t>(n_groups);
    st.group_momentum.resize(n);
    st.weight.resize(n);
    for (std::int64_t i = 0; i < n; ++i) {
      const double p = -lim + 2.0 * lim * i / (n - 1);
      st.group_momentum[i] = p;
      st.weight[i] = maxwell_boltzmann_pdf(0.5 * p, thermal);
    }
    st.weight /= st.weight.sum();
  }
  st.bunching = Eigen::ArrayXcd::Zero(st.group_momentum.size());
  st.pi = Eigen::ArrayXcd::Zero(st.group_momentum.size());
  st.probe = probe0;
  st.tau = 0.0;
  return st;
}

namespace {

template <class State, class Rhs, class Observe>
Trajectory run_rk4(State& state, Rhs&& rhs, Observe&& observe, double dt, std::int64_t n_steps,
                   std::int64_t stride) {
  if (!(dt > 0.0)) throw std::domain_error("integrate: dt must be positive");
  if (stride < 1) stride = 1;
  Trajectory traj;
  traj.reserve(static_cast<std::size_t>(n_steps / stride) + 2);
  traj.push_back(observe(state));
  for (std::int64_t step = 1; step <= n_steps; ++step) {
    state = rk4_step(state, dt, rhs);
    if (!std::isfinite(state.probe.real()) || !std::isfinite(state.probe.imag()))
      throw IntegrationAbort("integrate: non-finite probe amplitude", step);
    if (step % stride == 0 || step == n_steps) traj.push_back(observe(state));
  }
  return traj;
}

}  // namespace

Trajectory integrate_ensemble(Ensemble& state, const ControlParams& c, double dt,
                              std::int64_t n_steps, std::int64_t stride) {
  const bool has_conserved = c.alpha > 0.0;
  return run_rk4(
      state, [&c](const Ensemble& s) { return rao_nonlinear_rhs(s, c); },
      [&](const Ensemble& s) {
        TrajectoryRow row;
        row.tau = s.tau;
        row.probe = s.probe;
        row.bunching = bunching(s);
        row.conserved = has_conserved ? conserved_quantity(s, c) : kNaN;
        return row;
      },
      dt, n_steps, stride);
}

Trajectory integrate_velocity_groups(VelocityGroupState& state, const ControlParams& c,
                                     double dt, std::int64_t n_steps, std::int64_t stride) {
  return run_rk4(
      state, [&c](const VelocityGroupState& s) { return rao_linearized_rhs(s, c); },
      [](const VelocityGroupState& s) {
        TrajectoryRow row;
        row.tau = s.tau;
        row.probe = s.probe;
        row.bunching = s.bunching.sum();
        row.conserved = kNaN;
        return row;
      },
      dt, n_steps, stride);
}

GrowthFit fit_growth_rate(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 3) throw std::runtime_error("no exponential regime detected");
  const double a0 = series.front().second;
  std::size_t start = series.size();
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i].second > 10.0 * a0) {
      start = i;
      break;
    }
  }
  if (start + 3 > series.size()) throw std::runtime_error("no exponential regime detected");
  const double efolds = std::log(series.back().second / series[start].second);
  if (!(efolds >= 3.0)) throw std::runtime_error("no exponential regime detected");

  // least squares of ln|A| against tau over the post-transient window
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const std::int64_t n = static_cast<std::int64_t>(series.size() - start);
  for (std::size_t i = start; i < series.size(); ++i) {
    const double x = series[i].first, y = std::log(series[i].second);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::runtime_error("no exponential regime detected");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double ss = 0;
  for (std::size_t i = start; i < series.size(); ++i) {
    const double r = std::log(series[i].second) - (intercept + slope * series[i].first);
    ss += r * r;
  }
  const double rms = std::sqrt(ss / n);
  if (rms > 0.1) throw std::runtime_error("no exponential regime detected");
  return GrowthFit{slope, rms, n};
}

std::vector<std::pair<double, double>> probe_magnitude_series(const Trajectory& traj) {
  std::vector<std::pair<double, double>> out;
  out.reserve(traj.size());
  for (const auto& row : traj) out.emplace_back(row.tau, std::abs(row.probe));
  return out;
}

}  // namespace carl
