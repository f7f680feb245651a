#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "carl/erfcx.hpp"
#include "carl/rng.hpp"

using carl::erfcx;
using C = std::complex<double>;

namespace {

constexpr double kSqrtPi = 1.77245385090551602730;

struct RefPoint {
  C z;
  C value;
};

// 50-digit mpmath references rounded to double.
const std::vector<RefPoint> kReference = {
#include "erfcx_reference.inc"
};

double rel_err(C got, C want) { return std::abs(got - want) / std::abs(want); }

C random_point(std::uint64_t seed, std::uint64_t i, double rmin, double rmax) {
  const double logr =
      std::log10(rmin) + (std::log10(rmax) - std::log10(rmin)) * carl::rng::uniform_at(seed, 2 * i);
  const double phi = 3.14159265358979 * (carl::rng::uniform_at(seed, 2 * i + 1) - 0.5);
  return std::polar(std::pow(10.0, logr), phi);
}

// Small-x comparator: continued fraction of M(1, 3/2, x^2) feeding
// erfcx(x) = exp(x^2) - (2x/sqrt(pi)) M(1, 3/2, x^2); independent of the
// production algorithms and stable for x < 1.
double erfcx_small_x_cf(double x) {
  const double w = x * x;
  // M(1,3/2,w) = 1/(1 - (w/( 3/2 ))/(1 + w/...)) evaluated as a nested sum:
  // use the series with ratio recursion, which for x < 1 is itself a
  // terminating continued-fraction equivalent evaluated bottom-up.
  double term = 1.0, sum = 1.0;
  for (int n = 1; n < 80; ++n) {
    term *= w / (0.5 + n);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return std::exp(w) - (2.0 * x / kSqrtPi) * sum;
}

}  // namespace

TEST_CASE("frozen oracle table, 1e-12 relative") {
  for (const auto& p : kReference) {
    const C got = erfcx(p.z);
    CHECK(rel_err(got, p.value) < 1e-12);
  }
}

TEST_CASE("special values") {
  CHECK(erfcx(C(0.0, 0.0)) == C(1.0, 0.0));
  // e * erfc(1), 50-digit quadrature oracle
  CHECK(std::abs(erfcx(C(1.0, 0.0)).real() - 0.42758357615580700441) < 1e-14);
  CHECK(std::abs(carl::erfcx_real_line_check(2.0) - 0.25539567631050574387) < 1e-14);
  // asymptote x erfcx(x) sqrt(pi) -> 1
  CHECK(std::abs(30.0 * carl::erfcx_real_line_check(30.0) * kSqrtPi - 1.0) < 1e-3);
}

TEST_CASE("conjugate symmetry on random points") {
  for (int i = 0; i < 200; ++i) {
    const C z = random_point(11, i, 1e-2, 25.0);
    const C a = erfcx(std::conj(z));
    const C b = std::conj(erfcx(z));
    CHECK(std::abs(a - b) <= 1e-13 * std::abs(b));
  }
}

TEST_CASE("reflection identity where both sides are representable") {
  for (int i = 0; i < 200; ++i) {
    C z = random_point(17, i, 0.05, 12.0);
    if ((z * z).real() > 500.0) continue;
    const C lhs = erfcx(-z) + erfcx(z);
    const C rhs = 2.0 * std::exp(z * z);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
  }
}

TEST_CASE("derivative identity vs central differences") {
  // d/dz erfcx = 2 z erfcx(z) - 2/sqrt(pi)
  for (int i = 0; i < 100; ++i) {
    const C z = random_point(23, i, 0.1, 8.0);
    const double h = 1e-6 * std::max(1.0, std::abs(z));
    const C num = (erfcx(z + h) - erfcx(z - h)) / (2.0 * h);
    const C ana = 2.0 * z * erfcx(z) - 2.0 / kSqrtPi;
    CHECK(std::abs(num - ana) <= 1e-6 * std::max(1.0, std::abs(ana)));
  }
}

TEST_CASE("independent algorithms agree in their overlap annuli") {
  // series vs pole expansion around the inner seam
  for (int i = 0; i < 300; ++i) {
    const double r = 0.6 + 0.9 * carl::rng::uniform_at(31, 2 * i);
    const double phi = 3.14159265358979 * (carl::rng::uniform_at(31, 2 * i + 1) - 0.5);
    const C z = std::polar(r, phi);
    const C a = carl::detail::erfcx_series(z);
    const C b = carl::detail::erfcx_pole_sum(z);
    CHECK(std::abs(a - b) <= 1e-11 * std::abs(b));
  }
  // pole expansion vs continued fraction at and beyond the |z| = 4 seam,
  // inside the fraction's convergence sector
  for (int i = 0; i < 300; ++i) {
    const double r = 4.0 + 16.0 * carl::rng::uniform_at(37, 2 * i);
    const double phi = 0.80 * 3.14159265358979 * (carl::rng::uniform_at(37, 2 * i + 1) - 0.5);
    const C z = std::polar(r, phi);
    const C a = carl::detail::erfcx_pole_sum(z);
    const C b = carl::detail::erfcx_continued_fraction(z, 96);
    CHECK(std::abs(a - b) <= 1e-11 * std::abs(b));
  }
}

TEST_CASE("real-line check against independent continued fractions") {
  // Laplace continued fraction with generous depth for x >= 0.3
  for (double x = 0.3; x <= 30.0; x += 0.173) {
    const double got = carl::erfcx_real_line_check(x);
    const double ref = carl::detail::erfcx_continued_fraction(C(x, 0.0), 4000).real();
    CHECK(std::abs(got - ref) <= 1e-13 * ref);
  }
  // hypergeometric form below
  for (double x = 0.0; x < 0.3; x += 0.01) {
    const double got = carl::erfcx_real_line_check(x);
    const double ref = erfcx_small_x_cf(x);
    CHECK(std::abs(got - ref) <= 1e-13 * ref);
  }
}

TEST_CASE("error contract: no NaN, explicit overflow") {
  CHECK_THROWS_AS(erfcx(C(std::nan(""), 0.0)), std::domain_error);
  CHECK_THROWS_AS(erfcx(C(-40.0, 0.0)), std::overflow_error);
  // large but representable reflection still works
  const C v = erfcx(C(-3.0, 9.0));
  CHECK(std::isfinite(v.real()));
  CHECK(std::isfinite(v.imag()));
}
