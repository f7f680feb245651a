#ifndef CARL_ERFCX_HPP
#define CARL_ERFCX_HPP

#include <complex>

namespace carl {

/// Scaled complementary error function erfcx(z) = exp(z^2) erfc(z).
///
/// Relative accuracy ~1e-13 for |z| <= 30 in the half-plane Re(z) >= 0;
/// the left half-plane goes through the reflection identity
/// erfcx(-z) = 2 exp(z^2) - erfcx(z) with an explicit overflow error when
/// exp(z^2) is not representable.  All failure modes are exceptions; the
/// function never returns NaN or Inf.
std::complex<double> erfcx(std::complex<double> z);

/// Real-line entry point used by the verification harness.
double erfcx_real_line_check(double x);

// The three internal algorithms, exposed for cross-validation tests.
// Production dispatch: Maclaurin series for |z| <= 1, trapezoidal pole
// expansion for 1 < |z| <= 4, Laplace continued fraction beyond |z| = 4
// inside its convergence sector (the pole expansion covers the wedge near
// the imaginary axis for 4 < |z| < 6, where the continued fraction sits on
// the Stieltjes cut and stalls).  All three require Re(z) >= 0.
namespace detail {
std::complex<double> erfcx_series(std::complex<double> z);
std::complex<double> erfcx_pole_sum(std::complex<double> z);
std::complex<double> erfcx_continued_fraction(std::complex<double> z, int depth);
}  // namespace detail

}  // namespace carl

#endif  // CARL_ERFCX_HPP
