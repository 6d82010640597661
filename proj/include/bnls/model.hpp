#pragma once

#include "bnls/radial_grid.hpp"

namespace bnls {

/// Physical parameters of the coupled system
///   Delta^2 u1 + lambda1 u1 = mu1 u1^3 + beta u2^2 u1
///   Delta^2 u2 + lambda2 u2 = mu2 u2^3 + beta u1^2 u2
/// The cubic power is fixed (sigma = 1).
struct ModelParams {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double mu1 = 1.0;
  double mu2 = 1.0;
  double beta = 0.0;
  int dim = 2;

  double lambda(int j) const { return j == 0 ? lambda1 : lambda2; }
  double mu(int j) const { return j == 0 ? mu1 : mu2; }

  void validate() const;
};

/// Two-component state (u1, u2) on a common grid.
struct StatePair {
  GridPtr grid;
  Vector u1;
  Vector u2;

  StatePair() = default;
  StatePair(GridPtr g, Vector a, Vector b)
      : grid(std::move(g)), u1(std::move(a)), u2(std::move(b)) {}

  const Vector& component(int j) const { return j == 0 ? u1 : u2; }
  Vector& component(int j) { return j == 0 ? u1 : u2; }
};

void require_state(const StatePair& u);

} // namespace bnls
