#pragma once

#include <vector>

#include "bnls/energy.hpp"

namespace bnls {

/// Sampled fibering map phi_v(r) together with its closed-form critical
/// point. The scalar extras r_max and K are NaN for system profiles.
struct FiberingProfile {
  std::vector<double> r;
  std::vector<double> phi;
  std::vector<double> dphi;
  double r_crit = 0;
  double phi_at_crit = 0;
  double second_derivative_at_crit = 0;
  double r_max = std::numeric_limits<double>::quiet_NaN();
  double K = std::numeric_limits<double>::quiet_NaN();
};

/// phi_v(r) = (r^2/2)(\int|Dv|^2 + lambda \int v^2) - (r^4/4) mu \int v^4,
/// sampled on r_grid (default: 200 log-spaced points in
/// [1e-3 r_crit, 3 r_crit]).
FiberingProfile scalar_profile(const RadialField& v, double lambda, double mu,
                               const std::vector<double>& r_grid = {});

/// r = sqrt((\int|Dv|^2 + lambda \int v^2) / (mu \int v^4))
double scalar_critical_r(const RadialField& v, double lambda, double mu);

/// (1/4)(\int|Dv|^2 + lambda \int v^2)^2 / (mu \int v^4); invariant under
/// v -> c v.
double scalar_reduced_functional(const RadialField& v, double lambda, double mu);

struct RmaxK {
  double r_max = 0;
  double K = 0;
  double H_at_rmax = 0;
};

/// r_max = sqrt(\int|Dv|^2 / \int v^4) and K = 2 / l1_hat, with
/// H_v(r_max) = (1/4)(\int|Dv|^2)^2 / \int v^4.
RmaxK scalar_rmax_and_K(const RadialField& v, double l1_hat);

/// System fibering map Phi_v(r) = (r^2/2)||v||^2 - r^4 (F + beta G).
FiberingProfile system_profile(const StatePair& v, const ModelParams& p,
                               const std::vector<double>& r_grid = {});

/// critical radius of the system fibering map; equals the Nehari scale
double system_critical_r(const StatePair& v, const ModelParams& p);

/// J(r(v) v) = (1/16) ||v||^4 / (F(v) + beta G(v))
double system_reduced_functional(const StatePair& v, const ModelParams& p);

/// true iff beta > -sqrt(mu1 mu2)
bool admissibility(const ModelParams& p);

} // namespace bnls
