#ifndef CARL_PARAMS_HPP
#define CARL_PARAMS_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace carl {

using Complex = std::complex<double>;

namespace constants {
inline constexpr double hbar = 1.054571817e-34;  // [J s]
inline constexpr double k_boltzmann = 1.380649e-23;  // [J/K]
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double sqrt_pi = 1.77245385090551602730;
}  // namespace constants

/// Physical inputs in SI units: atomic mass, probe/pump wavenumbers,
/// atomic / probe / pump angular frequencies, dipole couplings, atom count
/// and initial pump normal-variable amplitude.
struct PhysicalParams {
  double mass = 0.0;        // m [kg]
  double k1 = 0.0;          // probe wavenumber [1/m]
  double k2 = 0.0;          // pump wavenumber [1/m]
  double omega0 = 0.0;      // atomic transition [rad/s]
  double omega1 = 0.0;      // probe [rad/s]
  double omega2 = 0.0;      // pump [rad/s]
  double g1 = 0.0;          // atom-probe coupling [rad/s]
  double g2 = 0.0;          // atom-pump coupling [rad/s]
  std::int64_t n_atoms = 1;
  Complex a2_0 = 0.0;       // initial pump normal variable

  // Throws std::domain_error on hard violations (mass/k sign, N < 1).
  void validate() const;
};

/// Dimensionless control parameters of both models.
struct ControlParams {
  double delta = 0.0;  // pump-probe detuning
  double alpha = 0.0;  // coupling, >= 0

  ControlParams() = default;
  ControlParams(double delta_, double alpha_);
};

/// Temperature tag: exact zero or finite with beta = sqrt(T_R / T).
/// Zero is a distinct variant, never encoded as an infinite beta.
class ThermalSpec {
 public:
  static ThermalSpec zero() { return ThermalSpec(); }
  static ThermalSpec finite(double beta);

  bool is_zero() const { return zero_; }
  double beta() const;  // throws on the Zero variant

  std::string label() const;

 private:
  ThermalSpec() = default;
  bool zero_ = true;
  double beta_ = 0.0;
};

enum class DetuningBranch { Positive, Negative };

struct PulledFrequency {
  double omega = 0.0;  // [rad/s]
  DetuningBranch branch = DetuningBranch::Positive;
};

/// Everything derive_control_params produces beyond (delta, alpha).
struct DerivedParams {
  ControlParams control;
  PulledFrequency pulled;
  double omega_r = 0.0;       // recoil frequency [rad/s]
  double recoil_temp = 0.0;   // T_R [K]
  std::vector<std::string> warnings;  // validity-of-regime notes, non-fatal
};

/// Pump frequency shifted by the collective pulling term, root of
/// omega - N|g2|^2/(omega - omega0) - omega2 = 0 on the branch with
/// omega -> omega2 as N -> 0.  Throws on omega2 == omega0.
PulledFrequency pulled_frequency(const PhysicalParams& p);

/// Dimensionless (delta, alpha) plus recoil scales.  Throws on k1 == k2.
DerivedParams derive_control_params(const PhysicalParams& p);

/// Maxwell-Boltzmann density f(k) = (2 beta / sqrt(pi)) exp(-4 k^2 beta^2)
/// for the dimensionless wavenumber k (momentum P = 2k).  Finite variant
/// only; the Zero variant must branch to the delta-distribution code paths.
double maxwell_boltzmann_pdf(double k, const ThermalSpec& t);

/// n thermal momenta P = 2k, deterministic in (seed, index) regardless of
/// threading.  Zero variant returns all zeros.
Eigen::ArrayXd sample_momenta(std::int64_t n, const ThermalSpec& t, std::uint64_t seed);

}  // namespace carl

#endif  // CARL_PARAMS_HPP
