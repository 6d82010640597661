#include "bnls/spectral.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <cmath>

#include "bnls/errors.hpp"
#include "bnls/scalar_solver.hpp"

namespace bnls {

namespace {

constexpr int kDenseCap = 1400;

using XSparse = Eigen::SparseMatrix<XScalar>;
using XLDLT = Eigen::SimplicialLDLT<XSparse>;

struct ClampedPencil {
  SparseMatrix T;
  SparseMatrix K;  // T^T (L^T W L) T, SPD on the clamped subspace
  SparseMatrix Mm; // T^T W T
};

ClampedPencil clamped_pencil(const RadialGrid& g) {
  ClampedPencil p;
  p.T = g.clamped_basis();
  SparseMatrix W(g.size(), g.size());
  std::vector<Eigen::Triplet<Scalar>> wt;
  for (int i = 0; i < g.size(); ++i) wt.emplace_back(i, i, g.weights()[i]);
  W.setFromTriplets(wt.begin(), wt.end());
  SparseMatrix Tt = p.T.transpose();
  p.K = (Tt * g.stiffness() * p.T).pruned();
  p.Mm = (Tt * W * p.T).pruned();
  p.K.makeCompressed();
  p.Mm.makeCompressed();
  return p;
}

XVector xmul(const XSparse& A, const XVector& x) {
  XVector out = XVector::Zero(A.rows());
  for (int j = 0; j < A.outerSize(); ++j)
    for (XSparse::InnerIterator it(A, j); it; ++it)
      out[it.row()] += it.value() * x[j];
  return out;
}

XScalar xdot(const XVector& a, const XVector& b) {
  XScalar s = 0;
  for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// extended-precision inverse iteration with deflation for the SPD pencil
/// (K, Mm); seeds may come from a dense solve or be random
struct PencilSolver {
  XSparse K, Mm;
  XLDLT fact;
  std::vector<XVector> modes;  // Mm-orthonormal
  std::vector<XScalar> values;

  explicit PencilSolver(const ClampedPencil& p) {
    K = p.K.cast<XScalar>();
    Mm = p.Mm.cast<XScalar>();
    fact.compute(K);
    if (fact.info() != Eigen::Success)
      throw SolverBreakdown("LDLT of the clamped pencil failed");
  }

  void deflate(XVector& y) const {
    for (const XVector& m : modes) {
      const XScalar c = xdot(y, xmul(Mm, m));
      y -= c * m;
    }
  }

  /// converge the next eigenpair from a seed
  void next(XVector y, int max_it = 600) {
    deflate(y);
    XScalar alpha = 0, alpha_old = -1;
    for (int it = 0; it < max_it; ++it) {
      XVector z = fact.solve(xmul(Mm, y));
      deflate(z);
      const XScalar nz = sqrtl(xdot(z, xmul(Mm, z)));
      if (!(nz > 0)) throw SolverBreakdown("inverse iteration lost the subspace");
      y = z / nz;
      alpha = xdot(y, xmul(K, y)) / xdot(y, xmul(Mm, y));
      if (alpha_old > 0 && fabsl(alpha - alpha_old) < 1e-18L * alpha) break;
      alpha_old = alpha;
    }
    modes.push_back(y);
    values.push_back(alpha);
  }
};

/// constrained eigen-residual on the grid, extended precision:
/// || P_S (B psi - alpha psi) ||_w with S = { u : e^T u = 0 }
double constrained_residual(const RadialGrid& g, const Vector& psi, double alpha) {
  XVector x = psi.cast<XScalar>();
  XVector Kx = g.apply_stiffness_x(x);
  const int M = g.size();
  XVector rho(M);
  for (int i = 0; i < M; ++i)
    rho[i] = Kx[i] / static_cast<XScalar>(g.weights()[i]) -
             static_cast<XScalar>(alpha) * x[i];
  // remove the constraint-force direction W^{-1} e
  XVector e = XVector::Zero(M);
  e[M - 1] = 15.0L / 8.0L;
  e[M - 2] = -10.0L / 8.0L;
  e[M - 3] = 3.0L / 8.0L;
  XScalar num = 0, den = 0;
  for (int i = 0; i < M; ++i) {
    num += e[i] * rho[i];
    den += e[i] * e[i] / static_cast<XScalar>(g.weights()[i]);
  }
  const XScalar c = num / den;
  XScalar s = 0;
  for (int i = 0; i < M; ++i) {
    const XScalar ri = rho[i] - c * e[i] / static_cast<XScalar>(g.weights()[i]);
    s += static_cast<XScalar>(g.weights()[i]) * ri * ri;
  }
  return static_cast<double>(sqrtl(s));
}

} // namespace

SpectrumReport clamped_spectrum(GridPtr grid, int k_max, double lambda_shift) {
  if (k_max < 1) throw Error("clamped_spectrum: k_max must be >= 1");
  const RadialGrid& g = *grid;
  ClampedPencil pen = clamped_pencil(g);
  PencilSolver solver(pen);
  const int n = static_cast<int>(pen.K.rows());

  if (n <= kDenseCap) {
    Matrix Kd = Matrix(pen.K);
    Matrix Md = Matrix(pen.Mm);
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(Kd, Md);
    if (ges.info() != Eigen::Success)
      throw SolverBreakdown("dense generalized eigensolver failed");
    for (int k = 0; k < k_max && k < n; ++k)
      solver.next(ges.eigenvectors().col(k).cast<XScalar>(), 30);
  } else {
    RandomStream rs(12345);
    for (int k = 0; k < k_max; ++k) {
      XVector seed(n);
      for (int i = 0; i < n; ++i) seed[i] = rs.uniform(-1.0, 1.0);
      solver.next(seed);
    }
  }

  SpectrumReport rep;
  rep.radius = g.radius();
  rep.lambda_shift = lambda_shift;
  for (std::size_t k = 0; k < solver.values.size(); ++k) {
    const double alpha = static_cast<double>(solver.values[k]);
    Vector y(n);
    for (int i = 0; i < n; ++i) y[i] = static_cast<double>(solver.modes[k][i]);
    Vector psi = pen.T * y;
    const double nrm = std::sqrt(g.inner(psi, psi));
    psi /= nrm;
    rep.alphas.push_back(alpha);
    rep.ells.push_back(lambda_shift + alpha);
    rep.residuals.push_back(constrained_residual(g, psi, alpha));
    rep.eigenfields.emplace_back(grid, std::move(psi));
  }
  // multiplicity clusters (1e-8 relative)
  rep.multiplicities.assign(rep.alphas.size(), 1);
  for (std::size_t k = 0; k < rep.alphas.size();) {
    std::size_t j = k + 1;
    while (j < rep.alphas.size() &&
           std::abs(rep.alphas[j] - rep.alphas[k]) <= 1e-8 * std::abs(rep.alphas[k]))
      ++j;
    for (std::size_t i = k; i < j; ++i)
      rep.multiplicities[i] = static_cast<int>(j - k);
    k = j;
  }
  return rep;
}

RayleighFirst rayleigh_first(GridPtr grid, double lambda) {
  if (lambda < 0) throw NonPositiveLambda("rayleigh_first needs lambda >= 0");
  SpectrumReport rep = clamped_spectrum(grid, 1, lambda);
  RayleighFirst out;
  out.l1_hat = rep.alphas[0];
  out.l1_lambda = rep.alphas[0] + lambda;
  out.mode = rep.eigenfields[0];
  out.residual = rep.residuals[0];
  return out;
}

int category_count(const RadialGrid& grid, double lambda, double cap) {
  if (!(cap > lambda)) throw InvalidCap("cap must exceed lambda");
  ClampedPencil pen = clamped_pencil(grid);
  const int n = static_cast<int>(pen.K.rows());
  if (n <= kDenseCap) {
    Matrix Kd = Matrix(pen.K);
    Matrix Md = Matrix(pen.Mm);
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(Kd, Md,
                                                         Eigen::EigenvaluesOnly);
    if (ges.info() != Eigen::Success)
      throw SolverBreakdown("dense generalized eigensolver failed");
    int count = 0;
    for (int k = 0; k < n; ++k)
      if (lambda + ges.eigenvalues()[k] <= cap) ++count;
    return count;
  }
  PencilSolver solver(pen);
  RandomStream rs(777);
  int count = 0;
  for (int k = 0; k < n; ++k) {
    XVector seed(n);
    for (int i = 0; i < n; ++i) seed[i] = rs.uniform(-1.0, 1.0);
    solver.next(seed);
    if (lambda + static_cast<double>(solver.values.back()) > cap) break;
    ++count;
  }
  return count;
}

namespace {

int sobolev_lambda_index(int j) {
  if (j != 1 && j != 2) throw Error("sobolev_constant: j must be 1 or 2");
  return j == 1 ? 1 : 0; // S_1^2 pairs with lambda_2, S_2^2 with lambda_1
}

} // namespace

SobolevResult sobolev_constant(int j, const ModelParams& p,
                               const RadialField& U_weight) {
  if (!U_weight.grid) throw Error("sobolev_constant: weight without grid");
  const RadialGrid& g = *U_weight.grid;
  const Vector& U = U_weight.values;
  require_grid(g, U);
  const double wmax = U.cwiseAbs().maxCoeff();
  if (!(wmax > 1e-150)) throw WeightDegenerate("weight field vanishes");
  const double lam_k = p.lambda(sobolev_lambda_index(j));
  const int M = g.size();

  SparseMatrix A = g.shifted_stiffness(lam_k);
  Vector wd(M); // diagonal of W * U^2
  for (int i = 0; i < M; ++i) wd[i] = g.weights()[i] * U[i] * U[i];

  Vector phi(M);
  if (M <= kDenseCap) {
    // dense route: s_min = 1 / max eig of A^{-1/2} (W U^2) A^{-1/2}
    Matrix Ad = Matrix(A);
    Eigen::LLT<Matrix> llt(Ad);
    if (llt.info() != Eigen::Success)
      throw SolverBreakdown("Cholesky of Delta^2 + lambda failed");
    Matrix C = llt.matrixL().solve(Matrix(wd.asDiagonal()));
    C = llt.matrixL().solve(C.transpose()).eval();
    C = 0.5 * (C + C.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(C);
    if (es.info() != Eigen::Success)
      throw SolverBreakdown("dense eigensolver failed");
    Vector y = es.eigenvectors().col(M - 1);
    phi = llt.matrixL().transpose().solve(y);
  } else {
    for (int i = 0; i < M; ++i) phi[i] = U[i]; // weight-shaped seed
  }

  // extended-precision power iteration on A^{-1} (W U^2)
  XSparse Ax = A.cast<XScalar>();
  XLDLT fact;
  fact.compute(Ax);
  if (fact.info() != Eigen::Success)
    throw SolverBreakdown("LDLT of Delta^2 + lambda failed");
  XVector x = phi.cast<XScalar>();
  XVector wdx = wd.cast<XScalar>();
  XScalar s = 0, s_old = -1;
  for (int it = 0; it < 2000; ++it) {
    XVector z = fact.solve((wdx.array() * x.array()).matrix());
    const XScalar nz = sqrtl(xdot(z, xmul(Ax, z)));
    if (!(nz > 0)) throw SolverBreakdown("power iteration collapsed");
    x = z / nz;
    const XScalar num = xdot(x, xmul(Ax, x));
    const XScalar den = xdot(x, (wdx.array() * x.array()).matrix());
    if (!(den > 0)) throw WeightDegenerate("weighted mass vanished in iteration");
    s = num / den;
    if (s_old > 0 && fabsl(s - s_old) < 1e-18L * s) break;
    s_old = s;
  }

  SobolevResult out;
  out.value = static_cast<double>(s);
  Vector phid(M);
  for (int i = 0; i < M; ++i) phid[i] = static_cast<double>(x[i]);
  phid /= std::sqrt(g.inner(phid, phid));
  // eigen-residual || (Delta^2 + lam) phi - s U^2 phi ||_w, extended precision
  {
    XVector xp = phid.cast<XScalar>();
    XVector Kp = g.apply_stiffness_x(xp);
    XScalar rr = 0;
    for (int i = 0; i < M; ++i) {
      const XScalar w = static_cast<XScalar>(g.weights()[i]);
      const XScalar ri = Kp[i] / w + static_cast<XScalar>(lam_k) * xp[i] -
                         s * static_cast<XScalar>(U[i]) * U[i] * xp[i];
      rr += w * ri * ri;
    }
    out.residual = static_cast<double>(sqrtl(rr));
  }
  out.minimizer = RadialField(U_weight.grid, std::move(phid));
  return out;
}

double sobolev_constant_pgd(int j, const ModelParams& p,
                            const RadialField& U_weight) {
  if (!U_weight.grid) throw Error("sobolev_constant_pgd: weight without grid");
  const RadialGrid& g = *U_weight.grid;
  const Vector& U = U_weight.values;
  const double wmax = U.cwiseAbs().maxCoeff();
  if (!(wmax > 1e-150)) throw WeightDegenerate("weight field vanishes");
  const double lam_k = p.lambda(sobolev_lambda_index(j));
  const int M = g.size();

  Eigen::SimplicialLDLT<SparseMatrix> fact;
  SparseMatrix A = g.shifted_stiffness(lam_k);
  fact.compute(A);
  if (fact.info() != Eigen::Success)
    throw SolverBreakdown("LDLT of Delta^2 + lambda failed");

  Vector w2(M);
  for (int i = 0; i < M; ++i) w2[i] = U[i] * U[i];
  Vector phi(M);
  for (int i = 0; i < M; ++i)
    phi[i] = std::exp(-g.nodes()[i] * g.nodes()[i]);

  double s = 0, s_old = -1;
  for (int it = 0; it < 5000; ++it) {
    double mass = 0, num = 0;
    Vector Aphi = A * phi;
    for (int i = 0; i < M; ++i) {
      mass += g.weights()[i] * w2[i] * phi[i] * phi[i];
      num += phi[i] * Aphi[i];
    }
    if (!(mass > 0)) throw WeightDegenerate("weighted mass vanished");
    s = num / mass;
    Vector grad = Aphi;
    for (int i = 0; i < M; ++i) grad[i] -= s * g.weights()[i] * w2[i] * phi[i];
    Vector dir = fact.solve(grad);
    phi -= 0.9 * dir;
    double m2 = 0;
    for (int i = 0; i < M; ++i) m2 += g.weights()[i] * w2[i] * phi[i] * phi[i];
    phi /= std::sqrt(m2);
    if (s_old > 0 && std::abs(s - s_old) < 1e-13 * s) break;
    s_old = s;
  }
  return s;
}

SobolevConstants thresholds(const ModelParams& p, const RadialField& U1,
                            const RadialField& U2) {
  SobolevResult s1 = sobolev_constant(1, p, U1);
  SobolevResult s2 = sobolev_constant(2, p, U2);
  SobolevConstants out;
  out.S1 = s1.value;
  out.S2 = s2.value;
  out.Lambda = std::min(s1.value, s2.value);
  out.LambdaPrime = std::max(s1.value, s2.value);
  out.phi1 = s1.minimizer;
  out.phi2 = s2.minimizer;
  return out;
}

} // namespace bnls
