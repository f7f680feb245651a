#ifndef CARL_WAO_HPP
#define CARL_WAO_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "carl/dispersion.hpp"
#include "carl/params.hpp"
#include "carl/rao.hpp"

namespace carl {

/// Integer-spaced momentum lattice kappa = offset + n, n in
/// [kappa_min, kappa_max].  The couplings shift kappa by exactly +-1, so
/// families with distinct fractional offsets never mix.
struct MomentumLattice {
  int kappa_min = 0;
  int kappa_max = 0;
  double offset = 0.0;  // in [0, 1)

  MomentumLattice() = default;
  MomentumLattice(int kmin, int kmax, double off = 0.0);

  int size() const { return kappa_max - kappa_min + 1; }
  double kappa(int i) const { return offset + kappa_min + i; }
  static MomentumLattice symmetric(int half_width, double off = 0.0) {
    return MomentumLattice(-half_width, half_width, off);
  }
};

/// Ground-state density matrix rho(kappa, kappa') on the lattice plus the
/// probe amplitude.  Hermitian with unit trace.
struct DensityState {
  MomentumLattice lattice;
  Eigen::MatrixXcd rho;
  Complex probe = 0.0;
  double tau = 0.0;

  DensityState plus(double c, const DensityState& d) const;
};

/// Linearized coherence set: delta_rho(kappa, kappa+1) for each listed
/// kappa, together with the weight differences
/// dweight = [N(kappa+1) - N(kappa)] / 2N that couple them to the probe.
/// Several fractional-offset families can be concatenated in one state;
/// the dynamics never mixes entries.
struct CoherenceState {
  Eigen::ArrayXd kappa;
  Eigen::ArrayXd dweight;
  Eigen::ArrayXcd drho;
  Complex probe = 0.0;
  double tau = 0.0;

  CoherenceState plus(double c, const CoherenceState& d) const;
};

/// Zero-temperature collective variable: d^2B/dtau^2 = -A (RAO, free
/// particle) or -B - A (WAO, harmonic oscillator at dimensionless
/// frequency 1), with dA/dtau = i(Delta A - alpha B) in both models.
struct OscillatorState {
  Complex b = 0.0;
  Complex b_dot = 0.0;
  Complex probe = 0.0;
  double tau = 0.0;

  OscillatorState plus(double c, const OscillatorState& d) const;
};

struct WaoRow {
  double tau = 0.0;
  Complex probe = 0.0;
  Complex bunching = 0.0;       // sum_kappa rho(kappa, kappa+1)
  double trace = 0.0;
  double hermiticity_error = 0.0;
  double conserved = 0.0;       // sum kappa rho(kappa,kappa) - |A|^2/(2 alpha)
};

/// Thermal diagonal rho(kappa,kappa') = (N(kappa)/N) delta, renormalized to
/// unit trace after truncation.  Errors out when the truncated tail of the
/// thermal weight exceeds 1e-10, reporting the required half-width.
DensityState init_thermal_density(const MomentumLattice& lattice, const ThermalSpec& thermal);

/// Equations of motion for rho and A; out-of-lattice references are zero.
DensityState wao_nonlinear_rhs(const DensityState& state, const ControlParams& c);

/// d delta_rho(k,k+1)/dtau = i(2k+1) delta_rho - i dweight A,
/// dA/dtau = i Delta A - i alpha sum delta_rho.
CoherenceState wao_linearized_rhs(const CoherenceState& state, const ControlParams& c);

OscillatorState zero_t_oscillator_rhs(const OscillatorState& state, Model model,
                                      const ControlParams& c);

/// Coherence set for linearized runs: the Zero variant yields exactly the
/// two coherences coupled to the probe; the Finite variant discretizes the
/// thermal weights on `n_families` interleaved fractional-offset lattices
/// of the given half-width (weights normalized across all families).
CoherenceState make_coherence_state(const ThermalSpec& thermal, int half_width, int n_families,
                                    Complex probe0);

Complex wao_bunching(const DensityState& state);
double wao_trace(const DensityState& state);
double wao_hermiticity_error(const DensityState& state);
double wao_conserved(const DensityState& state, const ControlParams& c);

/// RK4 drivers.  integrate_density aborts ("lattice too small") as soon as
/// either boundary diagonal entry exceeds 1e-8.
std::vector<WaoRow> integrate_density(DensityState& state, const ControlParams& c, double dt,
                                      std::int64_t n_steps, std::int64_t stride = 1);
Trajectory integrate_coherence(CoherenceState& state, const ControlParams& c, double dt,
                               std::int64_t n_steps, std::int64_t stride = 1);
Trajectory integrate_oscillator(OscillatorState& state, Model model, const ControlParams& c,
                                double dt, std::int64_t n_steps, std::int64_t stride = 1);

}  // namespace carl

#endif  // CARL_WAO_HPP
