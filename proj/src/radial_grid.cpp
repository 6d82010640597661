#include "bnls/radial_grid.hpp"

#include <cmath>
#include <vector>

#include "bnls/errors.hpp"

namespace bnls {

double omega_sphere(int dim) {
  if (dim == 1) return 1.0;
  return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double ball_volume(int dim, double radius) {
  return omega_sphere(dim) * std::pow(radius, dim) / dim;
}

RadialGrid::RadialGrid(int dim, double radius, int node_count)
    : dim_(dim), radius_(radius), size_(node_count) {
  spacing_ = radius_ / size_;
  sphere_ = omega_sphere(dim_);

  nodes_.resize(size_);
  edges_.resize(size_ + 1);
  weights_.resize(size_);
  for (int i = 0; i <= size_; ++i) edges_[i] = i * spacing_;
  for (int i = 0; i < size_; ++i) {
    nodes_[i] = (i + 0.5) * spacing_;
    weights_[i] =
        sphere_ * (std::pow(edges_[i + 1], dim_) - std::pow(edges_[i], dim_)) / dim_;
  }

  // conservative flux Laplacian, zero flux at r=0 and r=R
  std::vector<Eigen::Triplet<Scalar>> trip;
  trip.reserve(3 * size_);
  for (int i = 0; i < size_; ++i) {
    const double c = sphere_ / (weights_[i] * spacing_);
    if (i > 0) {
      const double a = c * std::pow(edges_[i], dim_ - 1) / spacing_;
      trip.emplace_back(i, i, -a);
      trip.emplace_back(i, i - 1, a);
    }
    if (i < size_ - 1) {
      const double b = c * std::pow(edges_[i + 1], dim_ - 1) / spacing_;
      trip.emplace_back(i, i + 1, b);
      trip.emplace_back(i, i, -b);
    }
  }
  lap_.resize(size_, size_);
  lap_.setFromTriplets(trip.begin(), trip.end());
  lap_.makeCompressed();

  SparseMatrix W(size_, size_), Winv(size_, size_);
  std::vector<Eigen::Triplet<Scalar>> wt, wit;
  for (int i = 0; i < size_; ++i) {
    wt.emplace_back(i, i, weights_[i]);
    wit.emplace_back(i, i, 1.0 / weights_[i]);
  }
  W.setFromTriplets(wt.begin(), wt.end());
  Winv.setFromTriplets(wit.begin(), wit.end());

  stiffness_ = (SparseMatrix(lap_.transpose()) * W * lap_).pruned();
  stiffness_.makeCompressed();
  bilap_ = (Winv * stiffness_).pruned();
  bilap_.makeCompressed();
}

void RadialGrid::check_size(const Vector& u) const {
  if (u.size() != size_) throw GridMismatch("field length does not match grid");
}

double RadialGrid::integrate(const Vector& f) const {
  check_size(f);
  XScalar s = 0;
  for (int i = 0; i < size_; ++i) s += static_cast<XScalar>(weights_[i]) * f[i];
  return static_cast<double>(s);
}

double RadialGrid::inner(const Vector& u, const Vector& v) const {
  check_size(u);
  check_size(v);
  XScalar s = 0;
  for (int i = 0; i < size_; ++i)
    s += static_cast<XScalar>(weights_[i]) * u[i] * v[i];
  return static_cast<double>(s);
}

double RadialGrid::integrate_power(const Vector& u, int p) const {
  check_size(u);
  if (p < 2 || p > 4) throw Error("integrate_power: p must be in {2,3,4}");
  XScalar s = 0;
  for (int i = 0; i < size_; ++i) {
    XScalar a = fabsl(static_cast<XScalar>(u[i]));
    XScalar t = a * a;
    if (p == 3) t *= a;
    if (p == 4) t *= a * a;
    s += static_cast<XScalar>(weights_[i]) * t;
  }
  return static_cast<double>(s);
}

double RadialGrid::inner_h(const Vector& u, const Vector& v, double lambda) const {
  if (lambda <= 0) throw NonPositiveLambda("inner_h requires lambda > 0");
  check_size(u);
  check_size(v);
  XVector ux = u.cast<XScalar>(), vx = v.cast<XScalar>();
  return static_cast<double>(inner_h_x(ux, vx, lambda));
}

double RadialGrid::norm_h2(const Vector& u, double lambda) const {
  return inner_h(u, u, lambda);
}

double RadialGrid::delta_norm2(const Vector& u) const {
  check_size(u);
  XVector ux = u.cast<XScalar>();
  XVector Ku = apply_stiffness_x(ux);
  XScalar s = 0;
  for (int i = 0; i < size_; ++i) s += ux[i] * Ku[i];
  return static_cast<double>(s);
}

Vector RadialGrid::apply_laplacian(const Vector& u) const {
  check_size(u);
  return lap_ * u;
}

Vector RadialGrid::apply_bilaplacian(const Vector& u) const {
  check_size(u);
  return bilap_ * u;
}

SparseMatrix RadialGrid::shifted_stiffness(double lambda) const {
  SparseMatrix K = stiffness_;
  SparseMatrix W(size_, size_);
  std::vector<Eigen::Triplet<Scalar>> wt;
  for (int i = 0; i < size_; ++i) wt.emplace_back(i, i, lambda * weights_[i]);
  W.setFromTriplets(wt.begin(), wt.end());
  K += W;
  K.makeCompressed();
  return K;
}

double RadialGrid::clamp_value(const Vector& u) const {
  check_size(u);
  const int M = size_;
  return (15.0 * u[M - 1] - 10.0 * u[M - 2] + 3.0 * u[M - 3]) / 8.0;
}

SparseMatrix RadialGrid::clamped_basis() const {
  const int M = size_;
  std::vector<Eigen::Triplet<Scalar>> trip;
  for (int i = 0; i < M - 1; ++i) trip.emplace_back(i, i, 1.0);
  // u_{M-1} = (10 u_{M-2} - 3 u_{M-3}) / 15
  trip.emplace_back(M - 1, M - 2, 10.0 / 15.0);
  trip.emplace_back(M - 1, M - 3, -3.0 / 15.0);
  SparseMatrix T(M, M - 1);
  T.setFromTriplets(trip.begin(), trip.end());
  T.makeCompressed();
  return T;
}

XVector RadialGrid::apply_stiffness_x(const XVector& u) const {
  if (u.size() != size_) throw GridMismatch("field length does not match grid");
  XVector out(size_);
  for (int i = 0; i < size_; ++i) out[i] = 0;
  // column-major traversal: out += K(:,j) * u_j
  for (int j = 0; j < stiffness_.outerSize(); ++j) {
    const XScalar uj = u[j];
    if (uj == 0) continue;
    for (SparseMatrix::InnerIterator it(stiffness_, j); it; ++it)
      out[it.row()] += static_cast<XScalar>(it.value()) * uj;
  }
  return out;
}

XScalar RadialGrid::inner_x(const XVector& u, const XVector& v) const {
  XScalar s = 0;
  for (int i = 0; i < size_; ++i)
    s += static_cast<XScalar>(weights_[i]) * u[i] * v[i];
  return s;
}

XScalar RadialGrid::inner_h_x(const XVector& u, const XVector& v, double lambda) const {
  XVector Kv = apply_stiffness_x(v);
  XScalar s = 0;
  for (int i = 0; i < size_; ++i) s += u[i] * Kv[i];
  s += static_cast<XScalar>(lambda) * inner_x(u, v);
  return s;
}

double RadialGrid::strong_residual_norm(const Vector& u, double lambda,
                                        const Vector& rhs) const {
  check_size(u);
  check_size(rhs);
  XVector ux = u.cast<XScalar>();
  XVector Ku = apply_stiffness_x(ux);
  XScalar s = 0;
  for (int i = 0; i < size_; ++i) {
    const XScalar w = static_cast<XScalar>(weights_[i]);
    XScalar r = Ku[i] / w + static_cast<XScalar>(lambda) * ux[i] -
                static_cast<XScalar>(rhs[i]);
    s += w * r * r;
  }
  return static_cast<double>(sqrtl(s));
}

GridPtr build_grid(int dim, double radius, int node_count) {
  if (dim < 1 || dim > 7)
    throw InvalidDimension("dimension must satisfy 1 <= N <= 7, got " +
                           std::to_string(dim));
  if (!(radius > 0))
    throw InvalidResolution("radius must be positive");
  if (node_count < 64)
    throw InvalidResolution("node count must be >= 64, got " +
                            std::to_string(node_count));
  return std::make_shared<RadialGrid>(dim, radius, node_count);
}

void require_same_grid(const RadialField& a, const RadialField& b) {
  if (!a.grid || !b.grid) throw GridMismatch("field without grid");
  if (!a.grid->same_geometry(*b.grid))
    throw GridMismatch("fields live on different grids");
}

void require_grid(const RadialGrid& g, const Vector& u) {
  if (u.size() != g.size()) throw GridMismatch("field length does not match grid");
}

} // namespace bnls
