#pragma once

#include "bnls/model.hpp"

namespace bnls {

/// All functional values at a state:
///   I_j = 1/2 ||u_j||_j^2 - mu_j/4 \int u_j^4
///   F   = 1/4 \int (mu1 u1^4 + mu2 u2^4)
///   G   = 1/2 \int u1^2 u2^2
///   J   = I1 + I2 - beta G
///   Psi = ||u||^2 - 4F - 4 beta G
struct EnergyReport {
  double I1 = 0, I2 = 0;
  double F = 0, G = 0;
  double J = 0;
  double Psi = 0;
  double norm2_total = 0, norm2_1 = 0, norm2_2 = 0;
};

EnergyReport eval_energies(const StatePair& u, const ModelParams& p);
EnergyReport eval_energies(const RadialGrid& g, const Vector& u1, const Vector& u2,
                           const ModelParams& p);

/// L2 representation of J'(u): component j is
///   Delta^2 u_j + lambda_j u_j - mu_j u_j^3 - beta u_k^2 u_j.
StatePair gradient(const StatePair& u, const ModelParams& p);
void gradient(const RadialGrid& g, const Vector& u1, const Vector& u2,
              const ModelParams& p, Vector& r1, Vector& r2);

struct NehariProjection {
  double t = 0;
  StatePair state;
};

/// Unique t > 0 with Psi(t v) = 0:  t = sqrt(||v||^2 / (4F(v) + 4 beta G(v))).
/// Throws ZeroState for v = (0,0) and NonAdmissibleDirection when
/// F(v) + beta G(v) is not positive.
NehariProjection nehari_project(const StatePair& v, const ModelParams& p);

/// scaling factor alone (same preconditions)
double nehari_scale(const RadialGrid& g, const Vector& v1, const Vector& v2,
                    const ModelParams& p);

/// Lagrange-multiplier estimate <J'(u), Psi'(u)> / ||Psi'(u)||^2 (L2 pairings);
/// vanishes at constrained critical points.
double multiplier_estimate(const StatePair& u, const ModelParams& p);

// ---- extended-precision evaluation (long double end to end) ----

/// J at a long-double state; used by the finite-difference gradient gate,
/// where forming u + eps*h in double already perturbs J above the FD floor.
XScalar eval_J_x(const RadialGrid& g, const ModelParams& p, const XVector& u1,
                 const XVector& u2);

/// analytic directional derivative (J'(u) | h) accumulated in long double
XScalar gradient_pairing_x(const RadialGrid& g, const ModelParams& p,
                           const XVector& u1, const XVector& u2,
                           const XVector& h1, const XVector& h2);

/// third derivative of t -> J(u + t h) at t = 0 (constant for quartic J);
/// the FD order test resamples directions where this degenerates
XScalar third_derivative_x(const RadialGrid& g, const ModelParams& p,
                           const XVector& u1, const XVector& u2,
                           const XVector& h1, const XVector& h2);

} // namespace bnls
