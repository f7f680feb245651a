#include "carl/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace carl {

namespace {

using C = std::complex<double>;
using Fn = std::function<C(double)>;

C simpson(const Fn& f, double a, double m, double b, C fa, C fm, C fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

C adapt(const Fn& f, double a, double b, C fa, C fm, C fb, C whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const C flm = f(lm), frm = f(rm);
  const C left = simpson(f, a, lm, m, fa, flm, fm);
  const C right = simpson(f, m, rm, b, fm, frm, fb);
  const C delta = left + right - whole;
  if (depth <= 0) throw std::runtime_error("integrate_adaptive: max subdivision depth reached");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

C integrate_adaptive(const Fn& f, double a, double b, double abs_tol) {
  if (!(b > a)) return C(0.0);
  const double m = 0.5 * (a + b);
  const C fa = f(a), fm = f(m), fb = f(b);
  const C whole = simpson(f, a, m, b, fa, fm, fb);
  return adapt(f, a, b, fa, fm, fb, whole, abs_tol, 48);
}

}  // namespace carl
