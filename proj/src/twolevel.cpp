#include "carl/twolevel.hpp"

#include <cmath>
#include <stdexcept>

#include "carl/ode.hpp"

namespace carl {

namespace {

constexpr Complex kI(0.0, 1.0);

// out(i,j) = m(i+dr, j+dc), zero where the source index leaves the grid.
Eigen::MatrixXcd shifted(const Eigen::MatrixXcd& m, int dr, int dc) {
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  const int r0 = std::max(0, -dr), r1 = n - std::max(0, dr);
  const int c0 = std::max(0, -dc), c1 = n - std::max(0, dc);
  if (r1 > r0 && c1 > c0)
    out.block(r0, c0, r1 - r0, c1 - c0) = m.block(r0 + dr, c0 + dc, r1 - r0, c1 - c0);
  return out;
}

int to_int_multiple(double k, double base, const char* name) {
  const double q = k / base;
  const double r = std::round(q);
  if (std::abs(q - r) > 1e-9)
    throw std::domain_error(std::string("TwoLevelConfig: ") + name +
                            " is not an integer multiple of base_k");
  return static_cast<int>(r);
}

}  // namespace

void TwoLevelConfig::validate() {
  phys.validate();
  if (!(base_k > 0.0)) throw std::domain_error("TwoLevelConfig: base_k must be positive");
  if (half_span < 2) throw std::domain_error("TwoLevelConfig: half_span must be >= 2");
  m1 = to_int_multiple(phys.k1, base_k, "k1");
  m2 = to_int_multiple(phys.k2, base_k, "k2");
  if (m1 == m2) throw std::domain_error("TwoLevelConfig: k1 == k2 on the grid");
}

TwoLevelState TwoLevelState::plus(double c, const TwoLevelState& d) const {
  TwoLevelState out;
  out.gg = gg + c * d.gg;
  out.eg = eg + c * d.eg;
  out.ee = ee + c * d.ee;
  out.a1 = a1 + c * d.a1;
  out.a2 = a2 + c * d.a2;
  out.t = t + c * d.t;
  return out;
}

TwoLevelState full_two_level_rhs(const TwoLevelState& s, const TwoLevelConfig& cfg) {
  const int n = cfg.size();
  const int m1 = cfg.m1, m2 = cfg.m2;
  const double g1 = cfg.phys.g1, g2 = cfg.phys.g2;
  const double inv2m = constants::hbar / (2.0 * cfg.phys.mass);
  const double natoms = static_cast<double>(cfg.phys.n_atoms);

  Eigen::ArrayXd kin(n);
  for (int i = 0; i < n; ++i) {
    const double k = cfg.momentum(i);
    kin[i] = inv2m * k * k;
  }

  const Eigen::MatrixXcd ge = s.eg.adjoint();
  TwoLevelState d;
  d.gg.resize(n, n);
  d.eg.resize(n, n);
  d.ee.resize(n, n);

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex phase = -kI * (kin[i] - kin[j]);
      d.gg(i, j) = phase * s.gg(i, j);
      d.eg(i, j) = (phase - kI * cfg.phys.omega0) * s.eg(i, j);
      d.ee(i, j) = phase * s.ee(i, j);
    }

  d.gg += g1 * std::conj(s.a1) * shifted(s.eg, -m1, 0) + g2 * std::conj(s.a2) * shifted(s.eg, -m2, 0) +
          g1 * s.a1 * shifted(ge, 0, -m1) + g2 * s.a2 * shifted(ge, 0, -m2);
  d.eg += g1 * s.a1 * (shifted(s.ee, 0, -m1) - shifted(s.gg, m1, 0)) +
          g2 * s.a2 * (shifted(s.ee, 0, -m2) - shifted(s.gg, m2, 0));
  d.ee += -g1 * std::conj(s.a1) * shifted(s.eg, 0, m1) - g2 * std::conj(s.a2) * shifted(s.eg, 0, m2) -
          g1 * s.a1 * shifted(ge, m1, 0) - g2 * s.a2 * shifted(ge, m2, 0);

  // da_i/dt = -i omega_i a_i + g_i sum_k rho_eg(k, k+k_i); the per-atom
  // normalization of rho puts the factor N into the source.
  d.a1 = -kI * cfg.phys.omega1 * s.a1 + g1 * natoms * shifted(s.eg, 0, m1).trace();
  d.a2 = -kI * cfg.phys.omega2 * s.a2 + g2 * natoms * shifted(s.eg, 0, m2).trace();
  d.t = 1.0;
  return d;
}

Eigen::MatrixXcd adiabatic_coherence(const Eigen::MatrixXcd& rho_gg, Complex a1_prime,
                                     Complex a2_prime, const TwoLevelConfig& cfg, double omega) {
  const double det = omega - cfg.phys.omega0;
  if (det == 0.0) throw std::domain_error("adiabatic_coherence: omega == omega0");
  const int two_k0 = cfg.m1 - cfg.m2;  // 2 k0 in grid units
  return -(kI / det) * (cfg.phys.g1 * a1_prime * shifted(rho_gg, two_k0, 0) +
                        cfg.phys.g2 * a2_prime * rho_gg);
}

TwoLevelState init_two_level(const TwoLevelConfig& cfg, Complex a1_0, Complex a2_0,
                             bool seed_adiabatic, double omega) {
  const int n = cfg.size();
  TwoLevelState s;
  s.gg = Eigen::MatrixXcd::Zero(n, n);
  s.eg = Eigen::MatrixXcd::Zero(n, n);
  s.ee = Eigen::MatrixXcd::Zero(n, n);
  s.gg(cfg.half_span, cfg.half_span) = 1.0;  // k = 0
  s.a1 = a1_0;
  s.a2 = a2_0;
  s.t = 0.0;
  if (seed_adiabatic) {
    // rho_eg(k,k') = e^{-i omega t} coh(k + k2, k') at t = 0
    const Eigen::MatrixXcd coh = adiabatic_coherence(s.gg, a1_0, a2_0, cfg, omega);
    s.eg = shifted(coh, cfg.m2, 0);
  }
  return s;
}

std::vector<TwoLevelRow> integrate_two_level(TwoLevelState& s, const TwoLevelConfig& cfg,
                                             double omega, double dt, std::int64_t n_steps,
                                             std::int64_t stride) {
  if (!(dt > 0.0)) throw std::domain_error("integrate_two_level: dt must be positive");
  if (stride < 1) stride = 1;
  const auto observe = [&](const TwoLevelState& st) {
    TwoLevelRow row;
    row.t = st.t;
    row.a1 = st.a1;
    row.a2 = st.a2;
    row.total_trace = st.gg.trace().real() + st.ee.trace().real();
    row.excited_population = st.ee.trace().real();
    const Complex rot = std::exp(kI * omega * st.t);
    const Eigen::MatrixXcd coh =
        adiabatic_coherence(st.gg, st.a1 * rot, st.a2 * rot, cfg, omega);
    const Eigen::MatrixXcd pred = std::conj(rot) * shifted(coh, cfg.m2, 0);
    const double scale = pred.norm();
    row.adiabatic_rel_err = scale > 0.0 ? (st.eg - pred).norm() / scale : 0.0;
    return row;
  };
  std::vector<TwoLevelRow> traj;
  traj.reserve(static_cast<std::size_t>(n_steps / stride) + 2);
  traj.push_back(observe(s));
  for (std::int64_t step = 1; step <= n_steps; ++step) {
    s = rk4_step(s, dt, [&cfg](const TwoLevelState& st) { return full_two_level_rhs(st, cfg); });
    if (!std::isfinite(s.a1.real()) || !std::isfinite(s.a1.imag()))
      throw IntegrationAbort("integrate_two_level: non-finite probe field", step);
    if (step % stride == 0 || step == n_steps) traj.push_back(observe(s));
  }
  return traj;
}

Eigen::MatrixXcd ground_chain(const TwoLevelState& s, const TwoLevelConfig& cfg,
                              int kappa_half_width) {
  const int two_k0 = cfg.m1 - cfg.m2;
  const int n = 2 * kappa_half_width + 1;
  Eigen::MatrixXcd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int gi = cfg.half_span + (i - kappa_half_width) * two_k0;
      const int gj = cfg.half_span + (j - kappa_half_width) * two_k0;
      if (gi < 0 || gj < 0 || gi >= cfg.size() || gj >= cfg.size())
        throw std::domain_error("ground_chain: kappa window exceeds the grid");
      out(i, j) = s.gg(gi, gj);
    }
  return out;
}

}  // namespace carl
