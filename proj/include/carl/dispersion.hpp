#ifndef CARL_DISPERSION_HPP
#define CARL_DISPERSION_HPP

#include <array>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "carl/params.hpp"

namespace carl {

enum class Model { Rao, Wao };

inline const char* model_name(Model m) { return m == Model::Rao ? "rao" : "wao"; }

enum class SeedOrigin { CubicRoot, Continuation, GridScan };

/// A refined characteristic exponent with positive real part.
struct GrowthResult {
  Complex s;                // characteristic exponent [1/tau]
  double gamma = 0.0;       // Re(s), the exponential growth rate
  double residual = 0.0;    // |characteristic function| at s
  int iterations = 0;
  SeedOrigin seed_origin = SeedOrigin::CubicRoot;
};

struct SweepPoint {
  double delta = 0.0;
  std::optional<double> gamma;  // absent where no root with Re(s) > 0 exists
};

struct SweepCurve {
  Model model = Model::Rao;
  double alpha = 0.0;
  ThermalSpec thermal = ThermalSpec::zero();
  std::vector<SweepPoint> points;  // deltas strictly increasing
};

struct StabilityMap {
  Model model = Model::Rao;
  ThermalSpec thermal = ThermalSpec::zero();
  Eigen::VectorXd delta_grid;
  Eigen::VectorXd alpha_grid;
  // Row i corresponds to alpha_grid[i], column j to delta_grid[j];
  // unstable(i,j) <=> gamma(i,j) > 0.
  Eigen::ArrayXXd gamma;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> unstable;
};

/// Root search failed in a way that is distinct from "stable": the grid scan
/// shows a candidate basin that refinement cannot converge.
class NumericalDiagnostic : public std::runtime_error {
 public:
  explicit NumericalDiagnostic(const std::string& what, double delta = 0.0)
      : std::runtime_error(what), delta_(delta) {}
  double delta() const { return delta_; }

 private:
  double delta_;
};

// --- characteristic functions -------------------------------------------
//
// Finite-temperature residuals, analytic in s.  The RAO form integrates the
// Maxwell-Boltzmann convolution exactly:
//   R(s) = s - i Delta - 2 i alpha beta^2 + 2 i sqrt(pi) alpha beta^3 s erfcx(beta s)
// and the WAO form pairs the two recoil-shifted resonances:
//   W(s) = s - i Delta + (sqrt(pi)/2) alpha beta [erfcx(beta(s+i)) - erfcx(beta(s-i))].
Complex rao_char_residual(Complex s, const ControlParams& c, double beta);
Complex wao_char_residual(Complex s, const ControlParams& c, double beta);
Complex char_residual(Model m, Complex s, const ControlParams& c, double beta);

// d/ds of the residuals, closed form via erfcx'(z) = 2 z erfcx(z) - 2/sqrt(pi).
Complex rao_char_derivative(Complex s, const ControlParams& c, double beta);
Complex wao_char_derivative(Complex s, const ControlParams& c, double beta);

// Laplace-integral forms evaluated by adaptive quadrature; converge only for
// Re(s) > 0 and exist purely as independent test oracles.
Complex rao_char_quadrature(Complex s, const ControlParams& c, double beta);
Complex wao_char_quadrature(Complex s, const ControlParams& c, double beta);

/// Zero-temperature ("cold-beam") cubic roots, descending Re:
/// RAO: s^3 - i Delta s^2 - i alpha = 0
/// WAO: s^3 - i Delta s^2 + s - i(alpha + Delta) = 0
std::array<Complex, 3> zero_t_cubic(Model m, const ControlParams& c);

/// Critical alpha at zero temperature (clamped below at 0):
/// RAO: 4 Delta^3 / 27, WAO: (2/27)[(3+Delta^2)^(3/2) - 9 Delta + Delta^3].
double threshold(Model m, double delta);

/// Closed-form zero-T growth rate; absent at or below threshold.  Agrees
/// with the max-Re cubic root to ~1e-12 absolute above threshold.
std::optional<double> gamma_closed_form(Model m, const ControlParams& c);

struct RootSearchOptions {
  std::optional<Complex> warm_start;
  double min_gamma = 1e-8;        // instability cutoff on Re(s)
  double residual_tol = 1e-10;
  double im_halfwidth = 5.0;      // grid-scan box: Im in [Delta -+ this]
  int grid_n = 48;
};

/// The root of the characteristic function with positive real part, if one
/// exists.  Strategy: Newton from the three cold-beam cubic roots (and the
/// warm start), then continuation in beta from the cold side, then a
/// rectangular grid scan with local refinement.  Throws NumericalDiagnostic
/// when grid evidence and refinement disagree.
std::optional<GrowthResult> find_unstable_root(Model m, const ControlParams& c,
                                               const ThermalSpec& thermal,
                                               const RootSearchOptions& opt = {});

/// Growth rate as a function of detuning at fixed alpha, warm-starting each
/// point from its neighbor.  Deterministic.
SweepCurve sweep_growth_rate(Model m, double alpha, const ThermalSpec& thermal,
                             double delta_min, double delta_max, int n_points);

/// Instability map over (delta, alpha).  Rows (fixed alpha) are independent
/// warm-start chains, distributed over `workers` threads; the output is
/// identical for any worker count.
StabilityMap stability_map(Model m, const ThermalSpec& thermal,
                           const Eigen::VectorXd& delta_grid,
                           const Eigen::VectorXd& alpha_grid, int workers = 1);

}  // namespace carl

#endif  // CARL_DISPERSION_HPP
