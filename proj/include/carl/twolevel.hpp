#ifndef CARL_TWOLEVEL_HPP
#define CARL_TWOLEVEL_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "carl/params.hpp"

namespace carl {

/// Grid setup for the full two-level validation model.  Momenta live on
/// k = base_k * n, n in [-half_span, half_span]; both wavenumbers must be
/// integer multiples of base_k so that every shift by k1 or k2 lands on the
/// grid (configuration error otherwise).
struct TwoLevelConfig {
  PhysicalParams phys;
  double base_k = 1.0;
  int half_span = 8;

  int m1 = 0;  // k1 / base_k, filled by validate()
  int m2 = 0;  // k2 / base_k

  void validate();
  int size() const { return 2 * half_span + 1; }
  double momentum(int i) const { return base_k * (i - half_span); }
};

/// Density matrices are stored per atom (total trace gg + ee equals 1);
/// the factor N reappears in the field source terms.
struct TwoLevelState {
  Eigen::MatrixXcd gg, eg, ee;
  Complex a1 = 0.0, a2 = 0.0;
  double t = 0.0;

  TwoLevelState plus(double c, const TwoLevelState& d) const;
};

/// Full Heisenberg equations of motion for (rho_gg, rho_eg, rho_ee) and the
/// two field modes.  The last rho_gg coupling uses the Hermiticity-
/// preserving form rho_ge(k, k'-k2).
TwoLevelState full_two_level_rhs(const TwoLevelState& s, const TwoLevelConfig& cfg);

/// Quasi-steady optical coherence in the rotating frame:
///   coh(k,k') = -(i/(omega-omega0)) [g1* a1' rho_gg(k+2k0, k') + g2* a2' rho_gg(k, k')].
Eigen::MatrixXcd adiabatic_coherence(const Eigen::MatrixXcd& rho_gg, Complex a1_prime,
                                     Complex a2_prime, const TwoLevelConfig& cfg, double omega);

/// All atoms in the ground state at k = 0.  When seed_adiabatic is set the
/// optical coherence starts on its quasi-steady manifold; a bare zero start
/// rings at the detuning frequency forever (the model has no damping).
TwoLevelState init_two_level(const TwoLevelConfig& cfg, Complex a1_0, Complex a2_0,
                             bool seed_adiabatic, double omega);

struct TwoLevelRow {
  double t = 0.0;
  Complex a1 = 0.0, a2 = 0.0;
  double total_trace = 0.0;     // tr(gg) + tr(ee)
  double excited_population = 0.0;
  // Frobenius-relative deviation of rho_eg from the adiabatic form,
  // compared through rho_eg(k,k') = e^{-i omega t} coh(k+k2, k').
  double adiabatic_rel_err = 0.0;
};

std::vector<TwoLevelRow> integrate_two_level(TwoLevelState& s, const TwoLevelConfig& cfg,
                                             double omega, double dt, std::int64_t n_steps,
                                             std::int64_t stride = 1);

/// Ground-state block restricted to the kappa chain (k = 2 k0 kappa),
/// for comparison against the dimensionless wave-optics model.
Eigen::MatrixXcd ground_chain(const TwoLevelState& s, const TwoLevelConfig& cfg,
                              int kappa_half_width);

}  // namespace carl

#endif  // CARL_TWOLEVEL_HPP
