#ifndef CARL_RAO_HPP
#define CARL_RAO_HPP

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "carl/params.hpp"

namespace carl {

/// Classical N-particle phase-space state: phases theta_j = 2 k0 z_j,
/// dimensionless momenta P_j = p_j / (hbar k0), complex probe amplitude A
/// and dimensionless time tau = 4 omega_r t.
struct Ensemble {
  Eigen::ArrayXd theta;
  Eigen::ArrayXd momentum;
  Complex probe = 0.0;
  double tau = 0.0;

  Ensemble plus(double c, const Ensemble& d) const;
  std::int64_t size() const { return theta.size(); }
};

/// Linearized velocity-group state: per-group bunching B(k) and conjugate
/// momentum Pi(k), with group momenta P(k) and weights N(k)/N.
struct VelocityGroupState {
  Eigen::ArrayXd group_momentum;  // P(k)
  Eigen::ArrayXd weight;          // N(k)/N, sums to 1
  Eigen::ArrayXcd bunching;       // B(k)
  Eigen::ArrayXcd pi;             // Pi(k)
  Complex probe = 0.0;
  double tau = 0.0;

  VelocityGroupState plus(double c, const VelocityGroupState& d) const;
};

/// One recorded trajectory sample.  `conserved` is NaN where the quantity
/// is undefined (alpha = 0, linearized runs).
struct TrajectoryRow {
  double tau = 0.0;
  Complex probe = 0.0;
  Complex bunching = 0.0;
  double conserved = 0.0;
};
using Trajectory = std::vector<TrajectoryRow>;

/// dtheta/dtau = P, dP/dtau = -i A e^{i theta} + c.c.,
/// dA/dtau = i Delta A - i alpha <e^{-i theta}>.  dP is exactly real.
Ensemble rao_nonlinear_rhs(const Ensemble& state, const ControlParams& c);

/// dB/dtau = -i Pi, dPi/dtau = i [P^2 B - 2 P Pi - (N(k)/N) A],
/// dA/dtau = i [Delta A - alpha sum_k B(k)].
VelocityGroupState rao_linearized_rhs(const VelocityGroupState& state, const ControlParams& c);

/// <e^{-i 2 k0 z}> = (1/N) sum_j e^{-i theta_j}; magnitude in [0, 1].
Complex bunching(const Ensemble& state);

/// (1/N) sum P_j + |A|^2 / alpha, an exact constant of the nonlinear flow.
/// Throws for alpha = 0 (then |A| itself is conserved).
double conserved_quantity(const Ensemble& state, const ControlParams& c);

/// quiet_start = true places theta_j on the uniform n-point grid (zero
/// bunching and zero second harmonic exactly); false draws them uniformly.
/// Momenta come from sample_momenta(n, thermal, seed).
Ensemble init_ensemble(std::int64_t n, const ThermalSpec& thermal, std::uint64_t seed,
                       Complex probe0, bool quiet_start);

/// Velocity groups discretizing the thermal distribution on an equispaced
/// momentum grid (single group at P = 0 for the zero-T variant), with
/// B = Pi = 0 and the instability seeded through probe0.
VelocityGroupState init_velocity_groups(const ThermalSpec& thermal, std::uint64_t n_groups,
                                        Complex probe0);

/// Fixed-step RK4 drivers; a row is recorded every `stride` steps (plus the
/// initial and final states).  Aborts with IntegrationAbort on non-finite
/// state.
Trajectory integrate_ensemble(Ensemble& state, const ControlParams& c, double dt,
                              std::int64_t n_steps, std::int64_t stride = 1);
Trajectory integrate_velocity_groups(VelocityGroupState& state, const ControlParams& c,
                                     double dt, std::int64_t n_steps, std::int64_t stride = 1);

struct GrowthFit {
  double gamma = 0.0;
  double rms_residual = 0.0;
  std::int64_t n_used = 0;
};

/// Least-squares slope of ln|A| vs tau after discarding the transient
/// (samples until |A| first exceeds 10x its initial value).  Requires at
/// least 3 e-foldings in the fit window and a residual consistent with pure
/// exponential growth; throws std::runtime_error("no exponential regime
/// detected") otherwise.
GrowthFit fit_growth_rate(const std::vector<std::pair<double, double>>& tau_absA);

/// Convenience: (tau, |A|) view of a trajectory.
std::vector<std::pair<double, double>> probe_magnitude_series(const Trajectory& traj);

}  // namespace carl

#endif  // CARL_RAO_HPP
