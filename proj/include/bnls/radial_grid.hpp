#pragma once

#include <memory>

#include "bnls/types.hpp"

namespace bnls {

/// Unit-sphere surface measure omega_{N-1}; N = 1 uses the half-line
/// convention (weight 1 on [0, R]).
double omega_sphere(int dim);

/// Volume of the ball B_R in dimension N (N = 1: the length R).
double ball_volume(int dim, double radius);

/// Radially symmetric geometry on (0, R]: staggered uniform nodes
/// r_i = (i + 1/2) h, finite-volume quadrature weights encoding
/// omega_{N-1} r^{N-1} dr, and the discrete radial operators.
///
/// The Laplacian is assembled in conservative flux form with zero-flux
/// closures at both ends (radial regularity at 0, even reflection at R);
/// it is exactly self-adjoint in the weighted inner product and its
/// kernel is the constants. The bilaplacian is the weighted composition
/// W^{-1} L^T W L, never an independently assembled 4th-order stencil.
/// Clamped boundary data (u(R) = u'(R) = 0) is represented by one extra
/// linear constraint used by the spectral solvers.
class RadialGrid {
public:
  RadialGrid(int dim, double radius, int node_count);

  int dim() const { return dim_; }
  double radius() const { return radius_; }
  int size() const { return size_; }
  double spacing() const { return spacing_; }
  const Vector& nodes() const { return nodes_; }
  const Vector& weights() const { return weights_; }

  bool same_geometry(const RadialGrid& other) const {
    return dim_ == other.dim_ && radius_ == other.radius_ && size_ == other.size_;
  }

  // quadrature
  double integrate(const Vector& f) const;
  double inner(const Vector& u, const Vector& v) const;       // \int u v dV
  double integrate_power(const Vector& u, int p) const;        // \int |u|^p dV
  double inner_h(const Vector& u, const Vector& v, double lambda) const; // \int Du Dv + lambda \int u v
  double norm_h2(const Vector& u, double lambda) const;        // inner_h(u,u,lambda)
  double delta_norm2(const Vector& u) const;                   // \int |Du|^2 = u^T K u

  // operators
  Vector apply_laplacian(const Vector& u) const;
  Vector apply_bilaplacian(const Vector& u) const;

  const SparseMatrix& laplacian_matrix() const { return lap_; }
  const SparseMatrix& bilaplacian_matrix() const { return bilap_; }
  /// stiffness K = L^T W L; (K + lambda W) is SPD for lambda > 0
  const SparseMatrix& stiffness() const { return stiffness_; }
  /// K + lambda * W as a sparse matrix
  SparseMatrix shifted_stiffness(double lambda) const;

  /// quadratic extrapolation of u(R) from the last three nodes;
  /// the clamped subspace is { u : clamp_value(u) = 0 }
  double clamp_value(const Vector& u) const;
  /// basis T of the clamped subspace (size M x (M-1), u_{M-1} eliminated)
  SparseMatrix clamped_basis() const;

  // extended-precision paths (accumulation in long double; entries of the
  // composed operator scale like 1/h^4, so double-precision evaluation
  // floors sit right at the solver tolerances)
  XVector apply_stiffness_x(const XVector& u) const; // K u
  XScalar inner_x(const XVector& u, const XVector& v) const;
  /// u^T K v + lambda <u,v>_w, the H(lambda) inner product
  XScalar inner_h_x(const XVector& u, const XVector& v, double lambda) const;
  /// L2 norm of Delta^2 u + lambda u - rhs for the assembled operator
  double strong_residual_norm(const Vector& u, double lambda, const Vector& rhs) const;

private:
  void check_size(const Vector& u) const;

  int dim_;
  double radius_;
  int size_;
  double spacing_;
  double sphere_;
  Vector nodes_;
  Vector edges_;
  Vector weights_;
  SparseMatrix lap_;
  SparseMatrix stiffness_;  // L^T W L
  SparseMatrix bilap_;      // W^{-1} L^T W L
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Factory enforcing the validity ranges (1 <= N <= 7, R > 0, M >= 64).
GridPtr build_grid(int dim, double radius, int node_count);

/// A real radial function sampled on a grid.
struct RadialField {
  GridPtr grid;
  Vector values;

  RadialField() = default;
  RadialField(GridPtr g, Vector v) : grid(std::move(g)), values(std::move(v)) {}
};

/// Throws GridMismatch unless both fields live on the same geometry.
void require_same_grid(const RadialField& a, const RadialField& b);
void require_grid(const RadialGrid& g, const Vector& u);

} // namespace bnls
