#ifndef CARL_ODE_HPP
#define CARL_ODE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace carl {

// Shared fixed-step stepping contract: a state type provides
//   State plus(double c, const State& d) const
// returning the state advanced by c * d, and the system supplies a callable
// rhs(state) -> State (the derivative reuses the state layout, with the
// tau/time slot set to 1).  Fixed-step classical Runge-Kutta keeps runs
// reproducible and makes convergence studies trivial.
template <class State, class Rhs>
State rk4_step(const State& y, double dt, Rhs&& rhs) {
  const State k1 = rhs(y);
  const State k2 = rhs(y.plus(0.5 * dt, k1));
  const State k3 = rhs(y.plus(0.5 * dt, k2));
  const State k4 = rhs(y.plus(dt, k3));
  const State combo = k1.plus(2.0, k2).plus(2.0, k3).plus(1.0, k4);
  return y.plus(dt / 6.0, combo);
}

/// Thrown when an integration aborts (non-finite state, lattice leakage);
/// carries the step index at which the abort happened.
class IntegrationAbort : public std::runtime_error {
 public:
  IntegrationAbort(const std::string& what, std::int64_t step)
      : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}
  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_;
};

}  // namespace carl

#endif  // CARL_ODE_HPP
