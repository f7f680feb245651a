#ifndef CARL_QUADRATURE_HPP
#define CARL_QUADRATURE_HPP

#include <complex>
#include <functional>

namespace carl {

/// Adaptive Simpson quadrature of a complex integrand on [a, b] to an
/// absolute tolerance.  Used by the dispersion-relation oracle forms; not
/// performance critical.
std::complex<double> integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                                        double a, double b, double abs_tol);

}  // namespace carl

#endif  // CARL_QUADRATURE_HPP
