#include "carl/cubic.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace carl {

std::array<std::complex<double>, 3> solve_cubic(std::complex<double> c2,
                                                std::complex<double> c1,
                                                std::complex<double> c0) {
  using C = std::complex<double>;
  Eigen::Matrix3cd companion = Eigen::Matrix3cd::Zero();
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  companion(0, 2) = -c0;
  companion(1, 2) = -c1;
  companion(2, 2) = -c2;
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(companion, false);

  std::array<C, 3> roots;
  for (int i = 0; i < 3; ++i) {
    C s = es.eigenvalues()(i);
    // A couple of Newton polish steps tighten the residual to rounding.
    for (int it = 0; it < 3; ++it) {
      const C p = ((s + c2) * s + c1) * s + c0;
      const C dp = (3.0 * s + 2.0 * c2) * s + c1;
      if (dp == 0.0) break;
      const C step = p / dp;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      s -= step;
    }
    roots[i] = s;
  }
  std::sort(roots.begin(), roots.end(),
            [](const C& a, const C& b) { return a.real() > b.real(); });
  return roots;
}

}  // namespace carl
