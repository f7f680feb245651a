#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "carl/params.hpp"
#include "carl/quadrature.hpp"
#include "carl/rng.hpp"

using namespace carl;

namespace {

PhysicalParams sodium_like() {
  PhysicalParams p;
  p.mass = 3.8175409e-26;
  p.k1 = 1.0667e7;
  p.k2 = -1.0664e7;
  p.omega0 = 3.1948e15;
  p.omega2 = p.omega0 + 6.2832e10;
  p.omega1 = p.omega2 - 4.1888e5;
  p.g1 = 2.1e4;
  p.g2 = 2.6e4;
  p.n_atoms = 1300000;
  p.a2_0 = Complex(1.9e3, 0.7e3);
  return p;
}

double steadyst_residual(const PhysicalParams& p, double omega) {
  const double n = static_cast<double>(p.n_atoms);
  return omega - n * p.g2 * p.g2 / (omega - p.omega0) - p.omega2;
}

}  // namespace

TEST_CASE("pulled frequency: zero coupling, defining equation, branch") {
  PhysicalParams p = sodium_like();
  p.n_atoms = 1;
  p.g2 = 0.0;
  CHECK(pulled_frequency(p).omega == doctest::Approx(p.omega2).epsilon(1e-14));

  p = sodium_like();
  const auto pf = pulled_frequency(p);
  CHECK(pf.branch == DetuningBranch::Positive);
  CHECK(std::abs(steadyst_residual(p, pf.omega)) < 1e-12 * std::abs(pf.omega));

  p.omega2 = p.omega0 - 6.2832e10;  // negative detuning branch
  const auto pf2 = pulled_frequency(p);
  CHECK(pf2.branch == DetuningBranch::Negative);
  CHECK(std::abs(steadyst_residual(p, pf2.omega)) < 1e-12 * std::abs(pf2.omega));

  p.omega2 = p.omega0;
  CHECK_THROWS_AS(pulled_frequency(p), std::domain_error);
}

TEST_CASE("pulled frequency residual on randomized inputs") {
  for (int i = 0; i < 200; ++i) {
    PhysicalParams p = sodium_like();
    p.omega2 = p.omega0 + (rng::uniform_at(3, i) - 0.5) * 2e12;
    if (p.omega2 == p.omega0) continue;
    p.g2 = 1e3 + 1e5 * rng::uniform_at(4, i);
    p.n_atoms = 1 + static_cast<std::int64_t>(1e7 * rng::uniform_at(5, i));
    const auto pf = pulled_frequency(p);
    CHECK(std::abs(steadyst_residual(p, pf.omega)) < 1e-12 * std::abs(pf.omega));
  }
}

TEST_CASE("pulled frequency matches the first-order expansion far off resonance") {
  PhysicalParams p = sodium_like();
  p.omega0 = 1e15;
  p.omega2 = p.omega0 + 1e10;
  p.g2 = 1e3;
  p.n_atoms = 10000000000;  // N |g2|^2 = 1e16
  const auto pf = pulled_frequency(p);
  const double expansion = p.omega2 + 1e16 / (p.omega2 - p.omega0);
  const double shift = pf.omega - p.omega2;
  CHECK(shift == doctest::Approx(1e6).epsilon(2e-4));
  CHECK(std::abs(pf.omega - expansion) / shift < 1e-4);
}

TEST_CASE("derived control parameters: frozen arbitrary-precision cross-check") {
  const auto d = derive_control_params(sodium_like());
  // values recomputed independently at 40-digit precision
  CHECK(d.pulled.omega == doctest::Approx(3194862832013986.5).epsilon(1e-14));
  CHECK(d.omega_r == doctest::Approx(157117.62532779162).epsilon(1e-13));
  CHECK(d.recoil_temp == doctest::Approx(1.200100964290376705e-6).epsilon(1e-13));
  CHECK(d.control.delta == doctest::Approx(0.67424353279145412508).epsilon(1e-12));
  CHECK(d.control.alpha == doctest::Approx(0.0020380307532620597628).epsilon(1e-12));
}

TEST_CASE("control parameter scalings and invariances") {
  PhysicalParams p = sodium_like();
  p.g1 = 0.0;
  CHECK(derive_control_params(p).control.alpha == 0.0);

  p = sodium_like();
  const auto base = derive_control_params(p);
  p.a2_0 *= 2.0;
  const auto doubled = derive_control_params(p);
  CHECK(doubled.control.alpha == doctest::Approx(4.0 * base.control.alpha).epsilon(1e-13));
  CHECK(doubled.control.delta == doctest::Approx(base.control.delta).epsilon(1e-13));

  // alpha invariant under a2(0) -> a2(0) e^{i phi}
  for (int i = 0; i < 32; ++i) {
    const double phi = 2.0 * constants::pi * rng::uniform_at(7, i);
    PhysicalParams q = sodium_like();
    q.a2_0 *= Complex(std::cos(phi), std::sin(phi));
    CHECK(derive_control_params(q).control.alpha ==
          doctest::Approx(base.control.alpha).epsilon(1e-13));
  }

  p = sodium_like();
  p.k2 = p.k1;
  CHECK_THROWS_AS(derive_control_params(p), std::domain_error);
}

TEST_CASE("maxwell-boltzmann pdf: peak, normalization, symmetry, second moment") {
  const auto t = ThermalSpec::finite(1.0);
  CHECK(maxwell_boltzmann_pdf(0.0, t) ==
        doctest::Approx(2.0 / constants::sqrt_pi).epsilon(1e-15));
  CHECK_THROWS_AS(maxwell_boltzmann_pdf(0.0, ThermalSpec::zero()), std::domain_error);

  for (double beta : {0.25, 1.0, 3.0}) {
    const auto tb = ThermalSpec::finite(beta);
    const auto f = [&](double k) { return Complex(maxwell_boltzmann_pdf(k, tb), 0.0); };
    const double norm = integrate_adaptive(f, -10.0 / beta, 10.0 / beta, 1e-12).real();
    CHECK(std::abs(norm - 1.0) < 1e-10);
    // <(2k)^2> = 1/(2 beta^2)
    const auto m2 = [&](double k) {
      return Complex(4.0 * k * k * maxwell_boltzmann_pdf(k, tb), 0.0);
    };
    const double second = integrate_adaptive(m2, -10.0 / beta, 10.0 / beta, 1e-12).real();
    CHECK(second == doctest::Approx(1.0 / (2.0 * beta * beta)).epsilon(1e-8));
    for (double k : {0.1, 0.77, 2.3})
      CHECK(maxwell_boltzmann_pdf(k, tb) == maxwell_boltzmann_pdf(-k, tb));
  }
}

TEST_CASE("momentum sampling: zero variant, determinism, variance") {
  const auto zeros = sample_momenta(5, ThermalSpec::zero(), 42);
  CHECK(zeros.size() == 5);
  CHECK(zeros.abs().maxCoeff() == 0.0);

  const auto t = ThermalSpec::finite(1.0);
  const auto a = sample_momenta(1000, t, 7);
  const auto b = sample_momenta(1000, t, 7);
  CHECK((a - b).abs().maxCoeff() == 0.0);
  const auto c = sample_momenta(1000, t, 8);
  CHECK((a - c).abs().maxCoeff() > 0.0);

  const auto big = sample_momenta(1000000, t, 1);
  const double var = (big - big.mean()).square().mean();
  CHECK(var == doctest::Approx(0.5).epsilon(0.01));
}
