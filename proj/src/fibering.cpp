#include "bnls/fibering.hpp"

#include <cmath>

#include "bnls/errors.hpp"

namespace bnls {

namespace {

std::vector<double> default_samples(double r_crit) {
  // log-spaced bracket of the unique maximum
  const int n = 200;
  std::vector<double> r(n);
  const double lo = std::log(1e-3 * r_crit), hi = std::log(3.0 * r_crit);
  for (int i = 0; i < n; ++i)
    r[i] = std::exp(lo + (hi - lo) * i / (n - 1.0));
  return r;
}

FiberingProfile make_profile(double quad, double quart,
                             const std::vector<double>& r_grid) {
  // phi(r) = (r^2/2) quad - (r^4/4) quart, quart > 0
  FiberingProfile prof;
  prof.r_crit = std::sqrt(quad / quart);
  prof.phi_at_crit = 0.5 * prof.r_crit * prof.r_crit * quad -
                     0.25 * std::pow(prof.r_crit, 4) * quart;
  prof.second_derivative_at_crit = -2.0 * prof.r_crit * prof.r_crit * quart;
  prof.r = r_grid.empty() ? default_samples(prof.r_crit) : r_grid;
  prof.phi.resize(prof.r.size());
  prof.dphi.resize(prof.r.size());
  for (std::size_t i = 0; i < prof.r.size(); ++i) {
    const double r = prof.r[i];
    prof.phi[i] = 0.5 * r * r * quad - 0.25 * r * r * r * r * quart;
    prof.dphi[i] = r * quad - r * r * r * quart;
  }
  return prof;
}

} // namespace

FiberingProfile scalar_profile(const RadialField& v, double lambda, double mu,
                               const std::vector<double>& r_grid) {
  if (!v.grid) throw Error("scalar_profile: field without grid");
  const RadialGrid& g = *v.grid;
  const double m2 = g.inner(v.values, v.values);
  if (m2 <= 0) throw ZeroDirection("direction is identically zero");
  const double quart = mu * g.integrate_power(v.values, 4);
  if (quart < 1e-30) throw DegenerateQuartic("quartic mass vanishes on the grid");
  const double dn = g.delta_norm2(v.values);
  const double quad = dn + lambda * m2;
  FiberingProfile prof = make_profile(quad, quart, r_grid);
  prof.r_max = std::sqrt(dn / (quart / mu)); // K left NaN here
  return prof;
}

double scalar_critical_r(const RadialField& v, double lambda, double mu) {
  if (!v.grid) throw Error("scalar_critical_r: field without grid");
  const RadialGrid& g = *v.grid;
  const double quart = mu * g.integrate_power(v.values, 4);
  if (quart < 1e-30) throw DegenerateQuartic("quartic mass vanishes on the grid");
  const double quad = g.delta_norm2(v.values) + lambda * g.inner(v.values, v.values);
  if (!(quad > 0)) throw NonPositiveQuadratic("quadratic part must be positive");
  return std::sqrt(quad / quart);
}

double scalar_reduced_functional(const RadialField& v, double lambda, double mu) {
  if (!v.grid) throw Error("scalar_reduced_functional: field without grid");
  const RadialGrid& g = *v.grid;
  const double quart = mu * g.integrate_power(v.values, 4);
  if (quart < 1e-30) throw DegenerateQuartic("quartic mass vanishes on the grid");
  const double quad = g.delta_norm2(v.values) + lambda * g.inner(v.values, v.values);
  if (!(quad > 0)) throw NonPositiveQuadratic("quadratic part must be positive");
  return 0.25 * quad * quad / quart;
}

RmaxK scalar_rmax_and_K(const RadialField& v, double l1_hat) {
  if (!v.grid) throw Error("scalar_rmax_and_K: field without grid");
  const RadialGrid& g = *v.grid;
  const double quart = g.integrate_power(v.values, 4);
  if (quart < 1e-30) throw DegenerateQuartic("quartic mass vanishes on the grid");
  const double dn = g.delta_norm2(v.values);
  RmaxK out;
  out.r_max = std::sqrt(dn / quart);
  out.K = 2.0 / l1_hat;
  out.H_at_rmax = 0.25 * dn * dn / quart;
  return out;
}

FiberingProfile system_profile(const StatePair& v, const ModelParams& p,
                               const std::vector<double>& r_grid) {
  require_state(v);
  EnergyReport e = eval_energies(v, p);
  if (e.norm2_total <= 0) throw ZeroDirection("direction is identically zero");
  const double quart4 = 4.0 * e.F + 4.0 * p.beta * e.G;
  const double scale = 4.0 * std::abs(e.F) + 4.0 * std::abs(p.beta * e.G);
  if (quart4 <= 1e-12 * scale || !(quart4 > 0))
    throw NonAdmissibleDirection("F(v) + beta G(v) must be positive");
  return make_profile(e.norm2_total, quart4, r_grid);
}

double system_critical_r(const StatePair& v, const ModelParams& p) {
  require_state(v);
  return nehari_scale(*v.grid, v.u1, v.u2, p);
}

double system_reduced_functional(const StatePair& v, const ModelParams& p) {
  require_state(v);
  EnergyReport e = eval_energies(v, p);
  if (e.norm2_total <= 0) throw ZeroDirection("direction is identically zero");
  const double denom = e.F + p.beta * e.G;
  const double scale = std::abs(e.F) + std::abs(p.beta * e.G);
  if (denom <= 1e-12 * scale || !(denom > 0))
    throw NonAdmissibleDirection("F(v) + beta G(v) must be positive");
  return e.norm2_total * e.norm2_total / (16.0 * denom);
}

bool admissibility(const ModelParams& p) {
  return p.beta > -std::sqrt(p.mu1 * p.mu2);
}

} // namespace bnls
