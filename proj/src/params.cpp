#include "carl/params.hpp"

#include <cmath>
#include <stdexcept>

#include "carl/rng.hpp"

namespace carl {

void PhysicalParams::validate() const {
  if (!(mass > 0.0)) throw std::domain_error("PhysicalParams: mass must be positive");
  if (!(k1 > 0.0) && !(k1 < 0.0)) throw std::domain_error("PhysicalParams: k1 must be nonzero");
  if (!(k2 > 0.0) && !(k2 < 0.0)) throw std::domain_error("PhysicalParams: k2 must be nonzero");
  if (n_atoms < 1) throw std::domain_error("PhysicalParams: N must be >= 1");
}

ControlParams::ControlParams(double delta_, double alpha_) : delta(delta_), alpha(alpha_) {
  if (alpha < 0.0) throw std::domain_error("ControlParams: alpha must be >= 0");
  if (!std::isfinite(delta) || !std::isfinite(alpha))
    throw std::domain_error("ControlParams: non-finite value");
}

ThermalSpec ThermalSpec::finite(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::domain_error("ThermalSpec: finite variant requires beta > 0");
  ThermalSpec t;
  t.zero_ = false;
  t.beta_ = beta;
  return t;
}

double ThermalSpec::beta() const {
  if (zero_) throw std::domain_error("ThermalSpec: beta undefined for the zero-temperature variant");
  return beta_;
}

std::string ThermalSpec::label() const {
  if (zero_) return "zero";
  return "beta=" + std::to_string(beta_);
}

PulledFrequency pulled_frequency(const PhysicalParams& p) {
  p.validate();
  const double det = p.omega2 - p.omega0;
  if (det == 0.0)
    throw std::domain_error("pulled_frequency: omega2 == omega0, branch undefined");
  const double ng2 = static_cast<double>(p.n_atoms) * p.g2 * p.g2;
  const double disc = std::sqrt(det * det + 4.0 * ng2);
  PulledFrequency out;
  out.branch = det > 0.0 ? DetuningBranch::Positive : DetuningBranch::Negative;
  const double sign = det > 0.0 ? 1.0 : -1.0;
  out.omega = 0.5 * (p.omega0 + p.omega2 + sign * disc);
  return out;
}

DerivedParams derive_control_params(const PhysicalParams& p) {
  if (p.k1 == p.k2)
    throw std::domain_error("derive_control_params: k1 == k2, recoil frequency vanishes");
  DerivedParams out;
  out.pulled = pulled_frequency(p);

  const double k0 = 0.5 * (p.k1 - p.k2);
  out.omega_r = constants::hbar * k0 * k0 / (2.0 * p.mass);
  out.recoil_temp = constants::hbar * out.omega_r / constants::k_boltzmann;

  const double det = out.pulled.omega - p.omega0;
  const double n = static_cast<double>(p.n_atoms);
  const double delta1 = out.pulled.omega - p.omega1 - n * p.g1 * p.g1 / det;
  const double delta = delta1 / (4.0 * out.omega_r);
  const double a2sq = std::norm(p.a2_0);
  const double alpha =
      n * p.g1 * p.g1 * p.g2 * p.g2 * a2sq / (8.0 * out.omega_r * out.omega_r * det * det);
  out.control = ControlParams(delta, alpha);

  // Validity of the far-detuned adiabatic elimination: |omega - omega0| has
  // to dominate the single-atom Rabi rates and the recoil scale.
  const double rabi = 2.0 * std::max(std::abs(p.g1), std::abs(p.g2)) * std::abs(p.a2_0);
  if (std::abs(det) < 10.0 * rabi)
    out.warnings.push_back("detuning |omega-omega0| does not dominate the Rabi rate");
  if (std::abs(det) < 10.0 * out.omega_r)
    out.warnings.push_back("detuning |omega-omega0| does not dominate the recoil frequency");
  return out;
}

double maxwell_boltzmann_pdf(double k, const ThermalSpec& t) {
  const double beta = t.beta();  // throws on Zero
  const double x = 2.0 * k * beta;
  return (2.0 * beta / constants::sqrt_pi) * std::exp(-x * x);
}

Eigen::ArrayXd sample_momenta(std::int64_t n, const ThermalSpec& t, std::uint64_t seed) {
  if (n < 1) throw std::domain_error("sample_momenta: n must be >= 1");
  Eigen::ArrayXd out(n);
  if (t.is_zero()) {
    out.setZero();
    return out;
  }
  // P = 2k has standard deviation 1/(beta*sqrt(2)).
  const double sigma = 1.0 / (t.beta() * std::sqrt(2.0));
  for (std::int64_t i = 0; i < n; ++i)
    out[i] = sigma * rng::normal_at(seed, static_cast<std::uint64_t>(i));
  return out;
}

}  // namespace carl
