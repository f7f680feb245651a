#ifndef CARL_CUBIC_HPP
#define CARL_CUBIC_HPP

#include <array>
#include <complex>

namespace carl {

/// Roots of the monic cubic s^3 + c2 s^2 + c1 s + c0 with complex
/// coefficients, sorted by descending real part.  Companion-matrix
/// eigenvalues polished by a few Newton steps; each root satisfies the
/// cubic to ~1e-14 * max(1, |coeffs|).
std::array<std::complex<double>, 3> solve_cubic(std::complex<double> c2,
                                                std::complex<double> c1,
                                                std::complex<double> c0);

}  // namespace carl

#endif  // CARL_CUBIC_HPP
