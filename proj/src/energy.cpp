#include "bnls/energy.hpp"

#include <cmath>

#include "bnls/errors.hpp"

namespace bnls {

void ModelParams::validate() const {
  if (!(lambda1 > 0) || !(lambda2 > 0))
    throw ConfigInvalid("lambda_j must be positive");
  if (!(mu1 > 0) || !(mu2 > 0)) throw ConfigInvalid("mu_j must be positive");
  if (dim < 1 || dim > 7)
    throw ConfigInvalid("dimension must satisfy 1 <= N <= 7");
}

void require_state(const StatePair& u) {
  if (!u.grid) throw GridMismatch("state without grid");
  require_grid(*u.grid, u.u1);
  require_grid(*u.grid, u.u2);
}

namespace {

struct RawEnergies {
  XScalar n1, n2, q1, q2, cross; // ||u_j||_j^2, \int u_j^4, \int u1^2 u2^2
};

RawEnergies raw_energies(const RadialGrid& g, const ModelParams& p,
                         const XVector& u1, const XVector& u2) {
  RawEnergies e{};
  e.n1 = g.inner_h_x(u1, u1, p.lambda1);
  e.n2 = g.inner_h_x(u2, u2, p.lambda2);
  XScalar q1 = 0, q2 = 0, cr = 0;
  const Vector& w = g.weights();
  for (int i = 0; i < g.size(); ++i) {
    const XScalar wi = static_cast<XScalar>(w[i]);
    const XScalar a = u1[i] * u1[i], b = u2[i] * u2[i];
    q1 += wi * a * a;
    q2 += wi * b * b;
    cr += wi * a * b;
  }
  e.q1 = q1;
  e.q2 = q2;
  e.cross = cr;
  return e;
}

} // namespace

EnergyReport eval_energies(const RadialGrid& g, const Vector& u1, const Vector& u2,
                           const ModelParams& p) {
  require_grid(g, u1);
  require_grid(g, u2);
  XVector x1 = u1.cast<XScalar>(), x2 = u2.cast<XScalar>();
  RawEnergies e = raw_energies(g, p, x1, x2);

  EnergyReport out;
  out.norm2_1 = static_cast<double>(e.n1);
  out.norm2_2 = static_cast<double>(e.n2);
  out.norm2_total = static_cast<double>(e.n1 + e.n2);
  const XScalar F = 0.25L * (p.mu1 * e.q1 + p.mu2 * e.q2);
  const XScalar G = 0.5L * e.cross;
  out.F = static_cast<double>(F);
  out.G = static_cast<double>(G);
  const XScalar I1 = 0.5L * e.n1 - 0.25L * p.mu1 * e.q1;
  const XScalar I2 = 0.5L * e.n2 - 0.25L * p.mu2 * e.q2;
  out.I1 = static_cast<double>(I1);
  out.I2 = static_cast<double>(I2);
  out.J = static_cast<double>(I1 + I2 - static_cast<XScalar>(p.beta) * G);
  out.Psi = static_cast<double>(e.n1 + e.n2 - 4.0L * F -
                                4.0L * static_cast<XScalar>(p.beta) * G);
  return out;
}

EnergyReport eval_energies(const StatePair& u, const ModelParams& p) {
  require_state(u);
  return eval_energies(*u.grid, u.u1, u.u2, p);
}

void gradient(const RadialGrid& g, const Vector& u1, const Vector& u2,
              const ModelParams& p, Vector& r1, Vector& r2) {
  require_grid(g, u1);
  require_grid(g, u2);
  r1 = g.apply_bilaplacian(u1);
  r2 = g.apply_bilaplacian(u2);
  for (int i = 0; i < g.size(); ++i) {
    r1[i] += p.lambda1 * u1[i] - p.mu1 * u1[i] * u1[i] * u1[i] -
             p.beta * u2[i] * u2[i] * u1[i];
    r2[i] += p.lambda2 * u2[i] - p.mu2 * u2[i] * u2[i] * u2[i] -
             p.beta * u1[i] * u1[i] * u2[i];
  }
}

StatePair gradient(const StatePair& u, const ModelParams& p) {
  require_state(u);
  StatePair out;
  out.grid = u.grid;
  gradient(*u.grid, u.u1, u.u2, p, out.u1, out.u2);
  return out;
}

double nehari_scale(const RadialGrid& g, const Vector& v1, const Vector& v2,
                    const ModelParams& p) {
  EnergyReport e = eval_energies(g, v1, v2, p);
  if (e.norm2_total <= 0) throw ZeroState("nehari_project needs v != (0,0)");
  const double denom = 4.0 * e.F + 4.0 * p.beta * e.G;
  const double scale = 4.0 * std::abs(e.F) + 4.0 * std::abs(p.beta * e.G);
  if (denom <= 1e-12 * scale || !(denom > 0))
    throw NonAdmissibleDirection("F(v) + beta G(v) must be positive");
  return std::sqrt(e.norm2_total / denom);
}

NehariProjection nehari_project(const StatePair& v, const ModelParams& p) {
  require_state(v);
  NehariProjection out;
  out.t = nehari_scale(*v.grid, v.u1, v.u2, p);
  out.state = StatePair(v.grid, out.t * v.u1, out.t * v.u2);
  return out;
}

double multiplier_estimate(const StatePair& u, const ModelParams& p) {
  require_state(u);
  const RadialGrid& g = *u.grid;
  Vector j1, j2;
  gradient(g, u.u1, u.u2, p, j1, j2);
  // Psi'(u) = 2 (Delta^2 + lambda_j) u_j - 4 mu_j u_j^3 - 4 beta u_k^2 u_j
  Vector p1 = g.apply_bilaplacian(u.u1), p2 = g.apply_bilaplacian(u.u2);
  for (int i = 0; i < g.size(); ++i) {
    p1[i] = 2.0 * (p1[i] + p.lambda1 * u.u1[i]) -
            4.0 * (p.mu1 * std::pow(u.u1[i], 3) + p.beta * u.u2[i] * u.u2[i] * u.u1[i]);
    p2[i] = 2.0 * (p2[i] + p.lambda2 * u.u2[i]) -
            4.0 * (p.mu2 * std::pow(u.u2[i], 3) + p.beta * u.u1[i] * u.u1[i] * u.u2[i]);
  }
  const double num = g.inner(j1, p1) + g.inner(j2, p2);
  const double den = g.inner(p1, p1) + g.inner(p2, p2);
  if (den == 0) return 0.0;
  return num / den;
}

XScalar eval_J_x(const RadialGrid& g, const ModelParams& p, const XVector& u1,
                 const XVector& u2) {
  RawEnergies e = raw_energies(g, p, u1, u2);
  const XScalar F = 0.25L * (p.mu1 * e.q1 + p.mu2 * e.q2);
  const XScalar G = 0.5L * e.cross;
  return 0.5L * (e.n1 + e.n2) - F - static_cast<XScalar>(p.beta) * G;
}

XScalar gradient_pairing_x(const RadialGrid& g, const ModelParams& p,
                           const XVector& u1, const XVector& u2,
                           const XVector& h1, const XVector& h2) {
  XScalar s = g.inner_h_x(u1, h1, p.lambda1) + g.inner_h_x(u2, h2, p.lambda2);
  const Vector& w = g.weights();
  XScalar t = 0;
  for (int i = 0; i < g.size(); ++i) {
    const XScalar wi = static_cast<XScalar>(w[i]);
    t += wi * (p.mu1 * u1[i] * u1[i] * u1[i] * h1[i] +
               p.mu2 * u2[i] * u2[i] * u2[i] * h2[i]);
    t += wi * static_cast<XScalar>(p.beta) *
         (u2[i] * u2[i] * u1[i] * h1[i] + u1[i] * u1[i] * u2[i] * h2[i]);
  }
  return s - t;
}

XScalar third_derivative_x(const RadialGrid& g, const ModelParams& p,
                           const XVector& u1, const XVector& u2,
                           const XVector& h1, const XVector& h2) {
  const Vector& w = g.weights();
  XScalar s = 0;
  for (int i = 0; i < g.size(); ++i) {
    const XScalar wi = static_cast<XScalar>(w[i]);
    s += wi * (p.mu1 * u1[i] * h1[i] * h1[i] * h1[i] +
               p.mu2 * u2[i] * h2[i] * h2[i] * h2[i]);
    s += wi * static_cast<XScalar>(p.beta) *
         (u1[i] * h1[i] * h2[i] * h2[i] + u2[i] * h2[i] * h1[i] * h1[i]);
  }
  return -6.0L * s;
}

} // namespace bnls
