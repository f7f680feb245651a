#include "carl/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "carl/cubic.hpp"
#include "carl/erfcx.hpp"
#include "carl/quadrature.hpp"

namespace carl {

namespace {

using C = Complex;
constexpr C kI(0.0, 1.0);
constexpr double kSqrtPi = constants::sqrt_pi;

double check_beta(double beta) {
  if (!(beta > 0.0)) throw std::domain_error("characteristic residual: beta must be > 0");
  return beta;
}

}  // namespace

C rao_char_residual(C s, const ControlParams& c, double beta) {
  check_beta(beta);
  const double b2 = beta * beta;
  return s - kI * c.delta - 2.0 * kI * c.alpha * b2 +
         2.0 * kI * kSqrtPi * c.alpha * b2 * beta * s * erfcx(beta * s);
}

C rao_char_derivative(C s, const ControlParams& c, double beta) {
  check_beta(beta);
  const double b2 = beta * beta;
  const C w = erfcx(beta * s);
  return 1.0 + 2.0 * kI * kSqrtPi * c.alpha * b2 * beta *
                   ((1.0 + 2.0 * b2 * s * s) * w - 2.0 * beta * s / kSqrtPi);
}

C wao_char_residual(C s, const ControlParams& c, double beta) {
  check_beta(beta);
  // Each factor e^{beta^2(s^2-1)} e^{+-2i beta^2 s} erfc(beta(s+-i)) is
  // exactly erfcx(beta(s+-i)) since beta^2 (s+-i)^2 = beta^2(s^2-1) +- 2i beta^2 s.
  return s - kI * c.delta +
         0.5 * kSqrtPi * c.alpha * beta * (erfcx(beta * (s + kI)) - erfcx(beta * (s - kI)));
}

C wao_char_derivative(C s, const ControlParams& c, double beta) {
  check_beta(beta);
  const C wp = erfcx(beta * (s + kI));
  const C wm = erfcx(beta * (s - kI));
  return 1.0 + kSqrtPi * c.alpha * beta * beta * beta * ((s + kI) * wp - (s - kI) * wm);
}

C char_residual(Model m, C s, const ControlParams& c, double beta) {
  return m == Model::Rao ? rao_char_residual(s, c, beta) : wao_char_residual(s, c, beta);
}

namespace {

C char_derivative(Model m, C s, const ControlParams& c, double beta) {
  return m == Model::Rao ? rao_char_derivative(s, c, beta) : wao_char_derivative(s, c, beta);
}

// Upper cutoff where exp(-p^2/4b^2 - p Re s) has decayed below 1e-20.
double quad_cutoff(C s, double beta) {
  const double from_gauss = 2.0 * beta * 7.0;
  if (s.real() <= 0.0) return from_gauss;
  return std::min(from_gauss, 48.0 / s.real());
}

}  // namespace

C rao_char_quadrature(C s, const ControlParams& c, double beta) {
  check_beta(beta);
  if (!(s.real() > 0.0))
    throw std::domain_error("rao_char_quadrature: integral requires Re(s) > 0");
  const double inv4b2 = 1.0 / (4.0 * beta * beta);
  const auto f = [&](double p) -> C { return p * std::exp(-p * p * inv4b2 - p * s); };
  const C integral = integrate_adaptive(f, 0.0, quad_cutoff(s, beta), 1e-9);
  return s - kI * c.delta - kI * c.alpha * integral;
}

C wao_char_quadrature(C s, const ControlParams& c, double beta) {
  check_beta(beta);
  if (!(s.real() > 0.0))
    throw std::domain_error("wao_char_quadrature: integral requires Re(s) > 0");
  const double inv4b2 = 1.0 / (4.0 * beta * beta);
  const auto f = [&](double p) -> C {
    return std::exp(-p * p * inv4b2 - p * s) * std::sin(p);
  };
  const C integral = integrate_adaptive(f, 0.0, quad_cutoff(s, beta), 1e-9);
  return s - kI * c.delta - kI * c.alpha * integral;
}

std::array<C, 3> zero_t_cubic(Model m, const ControlParams& c) {
  if (m == Model::Rao) return solve_cubic(-kI * c.delta, 0.0, -kI * c.alpha);
  return solve_cubic(-kI * c.delta, 1.0, -kI * (c.alpha + c.delta));
}

double threshold(Model m, double delta) {
  if (m == Model::Rao) return std::max(0.0, 4.0 * delta * delta * delta / 27.0);
  const double d2 = delta * delta;
  const double t = (2.0 / 27.0) * (std::pow(3.0 + d2, 1.5) - 9.0 * delta + delta * d2);
  return std::max(0.0, t);
}

std::optional<double> gamma_closed_form(Model m, const ControlParams& c) {
  const double a = c.alpha, d = c.delta;
  if (!(a > 0.0) || a <= threshold(m, d)) return std::nullopt;
  // Above threshold every bracketed quantity is a nonnegative real, so the
  // fractional powers are plain real cube roots; this is the branch choice
  // under which the formulas reproduce the max-Re cubic root.
  const double scale = 0.5 * std::sqrt(3.0) * std::cbrt(0.25 * a);
  double gamma;
  if (m == Model::Rao) {
    const double cc = 1.0 - 4.0 * d * d * d / (27.0 * a);
    const double sq = std::sqrt(cc);
    const double tp = std::cbrt((1.0 + sq) * (1.0 + sq));
    const double tm = std::cbrt((1.0 - sq) * (1.0 - sq));
    gamma = scale * std::abs(tp - tm);
  } else {
    const double e = 4.0 / (27.0 * a * a) * (1.0 - d * d) * (1.0 - d * d);
    const double dd = 1.0 + (4.0 * d / (3.0 * a)) * (1.0 - d * d / 9.0) - e;
    const double sq = std::sqrt(dd);
    const double tp = std::cbrt((1.0 + sq) * (1.0 + sq) + e);
    const double tm = std::cbrt((1.0 - sq) * (1.0 - sq) + e);
    gamma = scale * std::abs(tp - tm);
  }
  if (!(gamma > 0.0)) return std::nullopt;
  return gamma;
}

namespace {

struct NewtonOut {
  C s;
  double residual;
  int iterations;
};

// Damped complex Newton on the characteristic residual.  Returns nothing on
// divergence; erfcx overflow counts as a bad step, not a bad function.
std::optional<NewtonOut> newton_refine(Model m, C s0, const ControlParams& c, double beta,
                                       double tol) {
  C s = s0;
  for (int it = 0; it < 80; ++it) {
    C f, df;
    try {
      f = char_residual(m, s, c, beta);
      df = char_derivative(m, s, c, beta);
    } catch (const std::overflow_error&) {
      return std::nullopt;
    }
    if (std::abs(f) < tol) return NewtonOut{s, std::abs(f), it};
    if (df == 0.0) return std::nullopt;
    const C step = f / df;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag()) || std::abs(step) > 20.0)
      return std::nullopt;
    s -= step;
  }
  return std::nullopt;
}

std::optional<GrowthResult> accept(const std::optional<NewtonOut>& n, SeedOrigin origin,
                                   double min_gamma) {
  if (!n || !(n->s.real() > min_gamma)) return std::nullopt;
  return GrowthResult{n->s, n->s.real(), n->residual, n->iterations, origin};
}

double grid_abs_residual(Model m, C s, const ControlParams& c, double beta) {
  try {
    return std::abs(char_residual(m, s, c, beta));
  } catch (const std::overflow_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

std::optional<GrowthResult> find_unstable_root(Model m, const ControlParams& c,
                                               const ThermalSpec& thermal,
                                               const RootSearchOptions& opt) {
  const auto cubic_roots = zero_t_cubic(m, c);

  if (thermal.is_zero()) {
    const C s = cubic_roots[0];  // sorted by descending Re
    if (!(s.real() > opt.min_gamma)) return std::nullopt;
    const C c2 = -kI * c.delta;
    const C c1 = m == Model::Rao ? C(0.0) : C(1.0);
    const C c0 = m == Model::Rao ? -kI * c.alpha : -kI * (c.alpha + c.delta);
    const double res = std::abs(((s + c2) * s + c1) * s + c0);
    return GrowthResult{s, s.real(), res, 0, SeedOrigin::CubicRoot};
  }

  const double beta = thermal.beta();

  // (i) Newton from the warm start and the three cold-beam roots.
  std::vector<C> seeds;
  if (opt.warm_start) seeds.push_back(*opt.warm_start);
  for (const C& r : cubic_roots) seeds.push_back(r);
  std::optional<GrowthResult> best;
  for (const C& s0 : seeds) {
    auto got = accept(newton_refine(m, s0, c, beta, opt.residual_tol), SeedOrigin::CubicRoot,
                      opt.min_gamma);
    if (got && (!best || got->gamma > best->gamma)) best = got;
  }
  if (best) return best;

  // (ii) Continuation from the cold side: beta large is the near-cubic
  // regime (beta^2 = T_R/T), stepped geometrically down to the target,
  // halving the step whenever Newton loses the root.
  for (const C& s0 : cubic_roots) {
    if (!(s0.real() > opt.min_gamma)) continue;
    double b_hi = std::max(20.0, 2.0 * beta);
    C s = s0;
    auto at_start = newton_refine(m, s, c, b_hi, opt.residual_tol);
    if (!at_start) continue;
    s = at_start->s;
    double b_cur = b_hi;
    bool ok = true;
    int halvings = 0;
    const double ratio = std::pow(beta / b_hi, 1.0 / 20.0);
    double step_ratio = ratio;
    while (b_cur > beta * 1.0000001) {
      double b_next = std::max(beta, b_cur * step_ratio);
      auto r = newton_refine(m, s, c, b_next, opt.residual_tol);
      while (!r && halvings < 24) {
        b_next = std::sqrt(b_cur * b_next);  // halve the log-step
        ++halvings;
        r = newton_refine(m, s, c, b_next, opt.residual_tol);
      }
      if (!r) {
        ok = false;
        break;
      }
      s = r->s;
      b_cur = b_next;
      if (s.real() < -2.0) {  // root dived far into the stable half plane
        ok = false;
        break;
      }
    }
    if (ok) {
      auto fin = accept(newton_refine(m, s, c, beta, opt.residual_tol),
                        SeedOrigin::Continuation, opt.min_gamma);
      if (fin) return fin;
    }
  }

  // (iii) Rectangular grid scan with local refinement.
  const int n = opt.grid_n;
  const double s_max =
      std::max({1.0, 2.0 * std::cbrt(std::max(c.alpha, 0.0)), 2.0 * c.alpha * beta * beta});
  const double im_lo = c.delta - opt.im_halfwidth, im_hi = c.delta + opt.im_halfwidth;
  Eigen::ArrayXXd vals(n, n);
  for (int i = 0; i < n; ++i) {
    const double re = s_max * (i + 1) / n;
    for (int j = 0; j < n; ++j) {
      const double im = im_lo + (im_hi - im_lo) * j / (n - 1);
      vals(i, j) = grid_abs_residual(m, C(re, im), c, beta);
    }
  }
  struct Cand {
    double val;
    int i, j;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= n || jj >= n || (di == 0 && dj == 0)) continue;
          if (vals(ii, jj) < vals(i, j)) {
            is_min = false;
            break;
          }
        }
      if (is_min && std::isfinite(vals(i, j))) cands.push_back({vals(i, j), i, j});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.val < b.val; });

  std::vector<double> finite_vals;
  finite_vals.reserve(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::isfinite(vals(i, j))) finite_vals.push_back(vals(i, j));
  std::nth_element(finite_vals.begin(), finite_vals.begin() + finite_vals.size() / 2,
                   finite_vals.end());
  const double median = finite_vals[finite_vals.size() / 2];

  int deep_unrefined = 0;
  for (std::size_t k = 0; k < cands.size() && k < 6; ++k) {
    const double re = s_max * (cands[k].i + 1) / n;
    const double im = im_lo + (im_hi - im_lo) * cands[k].j / (n - 1);
    auto r = newton_refine(m, C(re, im), c, beta, opt.residual_tol);
    if (r && r->s.real() > opt.min_gamma)
      return GrowthResult{r->s, r->s.real(), r->residual, r->iterations, SeedOrigin::GridScan};
    if (!r && cands[k].val < 0.02 * median) ++deep_unrefined;
  }
  if (deep_unrefined > 0)
    throw NumericalDiagnostic("find_unstable_root: grid scan shows an unresolved minimum",
                              c.delta);
  return std::nullopt;  // stable
}

SweepCurve sweep_growth_rate(Model m, double alpha, const ThermalSpec& thermal,
                             double delta_min, double delta_max, int n_points) {
  if (n_points < 2) throw std::domain_error("sweep_growth_rate: n_points must be >= 2");
  if (!(delta_max > delta_min)) throw std::domain_error("sweep_growth_rate: empty delta range");
  SweepCurve curve{m, alpha, thermal, {}};
  curve.points.reserve(n_points);
  RootSearchOptions opt;
  for (int i = 0; i < n_points; ++i) {
    const double d = delta_min + (delta_max - delta_min) * i / (n_points - 1);
    ControlParams c(d, alpha);
    std::optional<GrowthResult> r;
    try {
      r = find_unstable_root(m, c, thermal, opt);
    } catch (const NumericalDiagnostic& e) {
      throw NumericalDiagnostic(std::string(e.what()) + " during sweep", d);
    }
    SweepPoint pt{d, std::nullopt};
    if (r) {
      pt.gamma = r->gamma;
      opt.warm_start = r->s;
    } else {
      opt.warm_start.reset();
    }
    curve.points.push_back(pt);
  }
  return curve;
}

StabilityMap stability_map(Model m, const ThermalSpec& thermal,
                           const Eigen::VectorXd& delta_grid, const Eigen::VectorXd& alpha_grid,
                           int workers) {
  const auto monotone = [](const Eigen::VectorXd& g) {
    for (int i = 1; i < g.size(); ++i)
      if (!(g[i] > g[i - 1])) return false;
    return true;
  };
  if (!monotone(delta_grid) || !monotone(alpha_grid))
    throw std::domain_error("stability_map: grids must be strictly increasing");

  StabilityMap map;
  map.model = m;
  map.thermal = thermal;
  map.delta_grid = delta_grid;
  map.alpha_grid = alpha_grid;
  const int na = static_cast<int>(alpha_grid.size());
  const int nd = static_cast<int>(delta_grid.size());
  map.gamma = Eigen::ArrayXXd::Zero(na, nd);
  map.unstable = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(na, nd, false);

  // One row per alpha; the warm-start chain runs inside a row, so the
  // result is independent of how rows are assigned to threads.
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto run_row = [&](int i) {
    RootSearchOptions opt;
    for (int j = 0; j < nd; ++j) {
      ControlParams c(delta_grid[j], alpha_grid[i]);
      auto r = find_unstable_root(m, c, thermal, opt);
      if (r) {
        map.gamma(i, j) = r->gamma;
        map.unstable(i, j) = true;
        opt.warm_start = r->s;
      } else {
        opt.warm_start.reset();
      }
    }
  };
  const int nw = std::max(1, workers);
  if (nw == 1) {
    for (int i = 0; i < na; ++i) run_row(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w)
      pool.emplace_back([&, w]() {
        for (int i = w; i < na; i += nw) {
          try {
            run_row(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  return map;
}

}  // namespace carl
