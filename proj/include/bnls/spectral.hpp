#pragma once

#include <vector>

#include "bnls/energy.hpp"

namespace bnls {

/// Eigenpairs of the clamped radial bilaplacian on B_R (ascending), with
/// the lambda-shifted eigenvalues ell_k = lambda + alpha_k.
struct SpectrumReport {
  double radius = 0;
  double lambda_shift = 0;
  std::vector<double> alphas;
  std::vector<double> ells;
  std::vector<RadialField> eigenfields; // w-orthonormal
  std::vector<double> residuals;        // constrained eigen-residuals
  std::vector<int> multiplicities;      // clusters within 1e-8 relative
};

/// k_max smallest clamped eigenpairs. Dense solve of the constrained pencil
/// for moderate grids, shift-invert subspace iteration with deflation
/// beyond; eigenpairs are refined by extended-precision inverse iteration.
SpectrumReport clamped_spectrum(GridPtr grid, int k_max, double lambda_shift = 0.0);

struct RayleighFirst {
  double l1_hat = 0;    // min \int|Du|^2 / \int u^2 over the clamped space
  double l1_lambda = 0; // l1_hat + lambda
  RadialField mode;
  double residual = 0;
};

RayleighFirst rayleigh_first(GridPtr grid, double lambda);

/// #{ k : 0 < ell_{k,lambda} <= cap } on the ball truncation.
int category_count(const RadialGrid& grid, double lambda, double cap);

struct SobolevResult {
  double value = 0;     // S_j^2
  RadialField minimizer;
  double residual = 0;  // eigen-residual of (Delta^2 + lambda_k) phi = s U^2 phi
};

/// Smallest generalized eigenvalue of (Delta^2 + lambda_k) phi = s U_j^2 phi;
/// note the index pairing: S_1^2 uses the ||.||_2 norm and weight U_1^2.
SobolevResult sobolev_constant(int j, const ModelParams& p, const RadialField& U_weight);

/// Independent route: direct Rayleigh-quotient minimization by
/// preconditioned projected gradient descent.
double sobolev_constant_pgd(int j, const ModelParams& p, const RadialField& U_weight);

struct SobolevConstants {
  double S1 = 0, S2 = 0; // squared constants S_j^2
  double Lambda = 0, LambdaPrime = 0;
  RadialField phi1, phi2;
};

SobolevConstants thresholds(const ModelParams& p, const RadialField& U1,
                            const RadialField& U2);

} // namespace bnls
