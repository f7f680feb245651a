#include "carl/erfcx.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace carl {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.77245385090551602730;
constexpr double kH = kPi / 6.0;         // trapezoidal step
constexpr int kPoleTerms = 14;           // nodes up to ~7, exp(-49) tail
constexpr double kCrossover = 4.0;       // series/pole vs continued fraction

using C = std::complex<double>;

// 1/Gamma(n/2 + 1) through the half-integer recursion.
constexpr int kSeriesTerms = 48;
constexpr std::array<double, kSeriesTerms> make_series_coeffs() {
  std::array<double, kSeriesTerms> c{};
  c[0] = 1.0;                                // 1/Gamma(1)
  c[1] = 2.0 / 1.7724538509055160273;        // 1/Gamma(3/2) = 2/sqrt(pi)
  for (int n = 2; n < kSeriesTerms; ++n) c[n] = c[n - 2] * 2.0 / n;
  return c;
}
constexpr auto kSeriesCoeff = make_series_coeffs();

}  // namespace

namespace detail {

// Maclaurin series erfcx(z) = sum_n (-z)^n / Gamma(n/2 + 1).  Loses digits
// to cancellation beyond |z| ~ 2.5, so production use stays inside |z| <= 1.
C erfcx_series(C z) {
  C sum = 0.0;
  C power = 1.0;
  for (int n = 0; n < kSeriesTerms; ++n) {
    const C term = kSeriesCoeff[n] * power;
    sum += term;
    if (n > 6 && std::abs(term) < 1e-18 * std::abs(sum)) break;
    power *= -z;
  }
  return sum;
}

// Midpoint/integer-node trapezoidal expansions of the Faddeeva integral for
// w(zeta) with zeta = i z; the discretization error is O(exp(-(pi/h)^2)).
// The two node families have interleaved poles, so whichever family has its
// nodes farther from Re(zeta) is evaluated; the pole-crossing correction
// term is required only while Im(zeta) < pi/h and carries the opposite
// denominator sign between the families.
C erfcx_pole_sum(C z) {
  const C zeta(-z.imag(), z.real());  // i z
  const double xi = std::abs(zeta.real());
  const double frac = xi / kH - std::floor(xi / kH);
  const double dist_mid = std::abs(frac - 0.5);
  const double dist_int = std::min(frac, 1.0 - frac);
  const bool use_mid = dist_mid >= dist_int;

  C sum = 0.0;
  if (use_mid) {
    for (int n = 0; n < kPoleTerms; ++n) {
      const double t = (n + 0.5) * kH;
      sum += std::exp(-t * t) * (1.0 / (zeta - t) + 1.0 / (zeta + t));
    }
  } else {
    sum = 1.0 / zeta;
    for (int n = 1; n < kPoleTerms; ++n) {
      const double t = n * kH;
      sum += std::exp(-t * t) * (1.0 / (zeta - t) + 1.0 / (zeta + t));
    }
  }
  C val = C(0.0, kH / kPi) * sum;

  if (zeta.imag() < kPi / kH) {
    const C egauss = std::exp(-zeta * zeta);
    const C rot = std::exp(C(0.0, -2.0 * kPi / kH) * zeta);
    val += use_mid ? 2.0 * egauss / (1.0 + rot) : 2.0 * egauss / (1.0 - rot);
  }
  return val;
}

// Laplace continued fraction, evaluated bottom-up at fixed depth.
C erfcx_continued_fraction(C z, int depth) {
  C f = 0.0;
  for (int k = depth; k >= 1; --k) f = (0.5 * k) / (z + f);
  return (1.0 / kSqrtPi) / (z + f);
}

}  // namespace detail

namespace {

// Dispatch for Re(z) >= 0.
C erfcx_right_half(C z) {
  const double r = std::abs(z);
  if (r <= 1.0) return detail::erfcx_series(z);
  if (r <= kCrossover) return detail::erfcx_pole_sum(z);
  // Continued fraction outside |z| = 4 except in the near-imaginary wedge,
  // where it converges too slowly below |z| = 6.
  const bool in_sector = std::abs(std::arg(z)) <= 0.44 * kPi;
  if (r < 6.0 && !in_sector) return detail::erfcx_pole_sum(z);
  const int depth = r < 5.0 ? 96 : (r < 8.0 ? 48 : 24);
  return detail::erfcx_continued_fraction(z, depth);
}

}  // namespace

C erfcx(C z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::domain_error("erfcx: non-finite argument");
  if (z.real() >= 0.0) return erfcx_right_half(z);
  // erfcx(z) = 2 exp(z^2) - erfcx(-z) for Re(z) < 0.
  const C z2 = z * z;
  if (z2.real() > 708.0)
    throw std::overflow_error("erfcx: exp(z^2) overflows in the reflection identity");
  return 2.0 * std::exp(z2) - erfcx_right_half(-z);
}

double erfcx_real_line_check(double x) { return erfcx(C(x, 0.0)).real(); }

}  // namespace carl
