#include "bnls/scalar_solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>

#include "bnls/errors.hpp"

namespace bnls {

const char* to_string(StateTag tag) {
  switch (tag) {
    case StateTag::ScalarGround: return "scalar-ground";
    case StateTag::SemiTrivial: return "semi-trivial";
    case StateTag::Coupled: return "coupled";
    case StateTag::SaddleCandidate: return "saddle-candidate";
  }
  return "unknown";
}

RandomStream::RandomStream(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

double RandomStream::uniform(double lo, double hi) {
  // splitmix64; fixed algorithm keeps runs bit-reproducible across platforms
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z = z ^ (z >> 31);
  const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Vector random_bump_field(const RadialGrid& g, RandomStream& rs) {
  Vector u = Vector::Zero(g.size());
  for (int b = 0; b < 3; ++b) {
    const double c = rs.uniform(0.0, 0.5 * g.radius());
    const double w = rs.uniform(0.8, 2.5);
    const double a = rs.uniform(-1.0, 1.0);
    for (int i = 0; i < g.size(); ++i) {
      const double t = (g.nodes()[i] - c) / w;
      u[i] += a * std::exp(-t * t);
    }
  }
  return u;
}

namespace {

double scalar_quartic(const RadialGrid& g, const Vector& v) {
  return g.integrate_power(v, 4);
}

double reduced_functional(const RadialGrid& g, const Vector& v, double lambda,
                          double mu) {
  const double n2 = g.norm_h2(v, lambda);
  const double q = scalar_quartic(g, v);
  return 0.25 * n2 * n2 / (mu * q);
}

Vector cube(const Vector& u) {
  return u.array().cube().matrix();
}

} // namespace

SolveResult solve_scalar_ground_state(double lambda, double mu, GridPtr grid,
                                      const SolveOptions& opts) {
  if (!(lambda > 0)) throw NonPositiveLambda("scalar solve needs lambda > 0");
  if (!(mu > 0)) throw Error("scalar solve needs mu > 0");
  const RadialGrid& g = *grid;
  const int M = g.size();
  const Vector& w = g.weights();

  Eigen::SimplicialLDLT<SparseMatrix> precond;
  precond.compute(g.shifted_stiffness(lambda));
  if (precond.info() != Eigen::Success)
    throw SolverBreakdown("LDLT factorization of Delta^2 + lambda failed");

  // initial iterate: Gaussian bump, optionally perturbed by the seed
  Vector v(M);
  if (opts.seed == 0) {
    for (int i = 0; i < M; ++i) v[i] = std::exp(-g.nodes()[i] * g.nodes()[i]);
  } else {
    RandomStream rs(opts.seed);
    const double a = rs.uniform(0.5, 2.0);
    const double b = rs.uniform(0.3, 2.0);
    const double c = rs.uniform(0.0, 6.0);
    for (int i = 0; i < M; ++i) {
      const double r = g.nodes()[i];
      v[i] = std::exp(-a * r * r) * (1.0 + 0.3 * std::sin(b * r + c));
    }
  }

  auto project = [&](const Vector& dir) {
    const double q = scalar_quartic(g, dir);
    if (q < 1e-30)
      throw CollapseToZero("direction has vanishing quartic mass");
    const double n2 = g.norm_h2(dir, lambda);
    return Vector(std::sqrt(n2 / (mu * q)) * dir);
  };

  Vector u = project(v);
  Vector rhs(M), resid(M), dir(M);
  int iters = 0;
  double res_norm = 0;

  auto strong_residual = [&](const Vector& x) {
    rhs = mu * cube(x);
    return g.strong_residual_norm(x, lambda, rhs);
  };

  const double phase1_tol =
      opts.newton_polish ? std::max(opts.tol, opts.descent_tol) : opts.tol;
  for (; iters < opts.max_iter; ++iters) {
    resid = g.apply_bilaplacian(u) + lambda * u - mu * cube(u);
    res_norm = std::sqrt(g.inner(resid, resid));
    if (res_norm < phase1_tol) break;
    dir = precond.solve((w.array() * resid.array()).matrix());
    const double slope = g.inner(resid, dir);
    const double f0 = reduced_functional(g, u, lambda, mu);
    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      Vector trial = u - step * dir;
      const double q = scalar_quartic(g, trial);
      if (q > 1e-30) {
        const double f1 = reduced_functional(g, trial, lambda, mu);
        if (f1 <= f0 - 1e-4 * step * slope) {
          u = project(trial);
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break; // stagnation; Newton phase (or failure) decides
  }

  if (opts.newton_polish) {
    Eigen::SparseLU<SparseMatrix> lu;
    double best = strong_residual(u);
    Vector u_best = u;
    for (int k = 0; k < opts.newton_cap; ++k) {
      if (best < 1e-12) break;
      SparseMatrix Jm = g.shifted_stiffness(lambda);
      std::vector<Eigen::Triplet<Scalar>> dt;
      dt.reserve(M);
      for (int i = 0; i < M; ++i)
        dt.emplace_back(i, i, -3.0 * mu * w[i] * u[i] * u[i]);
      SparseMatrix D(M, M);
      D.setFromTriplets(dt.begin(), dt.end());
      Jm += D;
      lu.compute(Jm);
      if (lu.info() != Eigen::Success) break;
      resid = g.apply_bilaplacian(u) + lambda * u - mu * cube(u);
      Vector delta = lu.solve((w.array() * resid.array()).matrix());
      u -= delta;
      ++iters;
      const double rn = strong_residual(u);
      if (rn < best) {
        best = rn;
        u_best = u;
      } else if (rn > 0.5 * best) {
        break; // at the evaluation floor (or diverging): keep the best state
      }
    }
    u = u_best;
  }

  if (u[0] < 0) u = -u;
  res_norm = strong_residual(u);

  SolveResult out;
  out.state = StatePair(grid, u, Vector::Zero(M));
  ModelParams p;
  p.lambda1 = lambda;
  p.lambda2 = lambda;
  p.mu1 = mu;
  p.mu2 = mu;
  p.beta = 0.0;
  p.dim = g.dim();
  out.energy = eval_energies(out.state, p);
  out.residual = res_norm;
  out.iterations = iters;
  out.converged = res_norm < opts.tol;
  out.multiplier = multiplier_estimate(out.state, p);
  out.tag = StateTag::ScalarGround;
  if (!out.converged && !opts.allow_nonconverged)
    throw NonConvergence("scalar solve stalled at residual " +
                         std::to_string(res_norm));
  return out;
}

double scalar_multistart_spread(double lambda, double mu, GridPtr grid,
                                const SolveOptions& opts, int n_seeds,
                                std::vector<double>* levels) {
  double lo = 0, hi = 0;
  for (int s = 0; s < n_seeds; ++s) {
    SolveOptions o = opts;
    o.seed = 1000 + 7919 * s;
    SolveResult r = solve_scalar_ground_state(lambda, mu, grid, o);
    const double J = r.energy.J;
    if (levels) levels->push_back(J);
    if (s == 0) {
      lo = hi = J;
    } else {
      lo = std::min(lo, J);
      hi = std::max(hi, J);
    }
  }
  return (hi - lo) / std::max(std::abs(lo), 1e-300);
}

namespace {

// even-symmetric interpolation of a radial profile at x >= 0
double interp_radial(const RadialGrid& g, const Vector& u, double x) {
  const int M = g.size();
  const double h = g.spacing();
  const Vector& r = g.nodes();
  if (x <= r[0]) {
    // quadratic in r^2 through the first two nodes (radial regularity)
    const double t = (x * x - r[0] * r[0]) / (r[1] * r[1] - r[0] * r[0]);
    return u[0] + (u[1] - u[0]) * t;
  }
  int j = static_cast<int>(std::floor(x / h - 0.5));
  j = std::max(1, std::min(M - 3, j));
  // 4-point Lagrange on nodes j-1..j+2
  const double xi = (x - r[j]) / h; // in [0,1] for interior x
  const double xm = xi + 1.0, x0 = xi, x1 = xi - 1.0, x2 = xi - 2.0;
  const double c0 = -x0 * x1 * x2 / 6.0;
  const double c1 = xm * x1 * x2 / 2.0;
  const double c2 = -xm * x0 * x2 / 2.0;
  const double c3 = xm * x0 * x1 / 6.0;
  return c0 * u[j - 1] + c1 * u[j] + c2 * u[j + 1] + c3 * u[j + 2];
}

} // namespace

RadialField rescale_ground_state(const RadialField& U, double lambda, double mu,
                                 GridPtr target) {
  if (!U.grid) throw Error("rescale: field without grid");
  const RadialGrid& gs = *U.grid;
  const RadialGrid& gt = *target;
  const double stretch = std::pow(lambda, 0.25);
  const double r_needed = stretch * gt.nodes()[gt.size() - 1];
  if (r_needed > gs.nodes()[gs.size() - 1] + 0.5 * gs.spacing())
    throw DomainTooSmall("source grid must cover lambda^{1/4} * R_target");
  const double amp = std::sqrt(lambda / mu);
  Vector out(gt.size());
  for (int i = 0; i < gt.size(); ++i)
    out[i] = amp * interp_radial(gs, U.values, stretch * gt.nodes()[i]);
  return RadialField(std::move(target), std::move(out));
}

TailFit tail_fit(const RadialField& U, int dim) {
  (void)dim; // the ansatz exponents do not enter the fit, only the report
  if (!U.grid) throw Error("tail_fit: field without grid");
  const RadialGrid& g = *U.grid;
  const Vector& u = U.values;
  const Vector& r = g.nodes();
  const int M = g.size();

  const double peak = u.cwiseAbs().maxCoeff();
  if (!(peak > 0)) throw BelowNoiseFloor("field is identically zero");
  const double floor = peak * 1e-9;
  const double rmin = 2.0;
  const double rmax = g.radius() - 4.0; // stay clear of the clamped wall

  std::vector<double> zc;
  for (int i = 0; i + 1 < M; ++i) {
    if (r[i] < rmin || r[i + 1] > rmax) continue;
    if (u[i] * u[i + 1] < 0) {
      const double t = u[i] / (u[i] - u[i + 1]);
      zc.push_back(r[i] + t * g.spacing());
    }
  }
  if (zc.size() < 2) throw WindowTooNarrow("fewer than two zero crossings");

  // extrema between consecutive crossings, refined parabolically,
  // kept while above the noise floor
  std::vector<double> er, ev, kept;
  kept.push_back(zc[0]);
  for (std::size_t c = 0; c + 1 < zc.size(); ++c) {
    int jbest = -1;
    double vbest = 0;
    for (int i = 0; i < M; ++i) {
      if (r[i] <= zc[c] || r[i] >= zc[c + 1]) continue;
      if (std::abs(u[i]) > vbest) {
        vbest = std::abs(u[i]);
        jbest = i;
      }
    }
    if (jbest < 1 || jbest >= M - 1) break;
    double rj = r[jbest], vj = std::abs(u[jbest]);
    const double y0 = std::abs(u[jbest - 1]), y1 = vj, y2 = std::abs(u[jbest + 1]);
    const double dd = y0 - 2 * y1 + y2;
    if (dd < 0) {
      const double s = 0.5 * (y0 - y2) / dd;
      rj += s * g.spacing();
      vj = y1 - 0.25 * (y0 - y2) * s;
    }
    if (vj <= floor) break;
    er.push_back(rj);
    ev.push_back(vj);
    kept.push_back(zc[c + 1]);
  }
  if (er.size() < 3)
    throw WindowTooNarrow("fewer than three usable tail extrema");

  TailFit fit;
  fit.crossings = kept;
  fit.extrema_used = static_cast<int>(er.size());
  fit.window_lo = kept.front();
  fit.window_hi = kept.back();

  double mean_gap = 0;
  for (std::size_t c = 0; c + 1 < kept.size(); ++c) mean_gap += kept[c + 1] - kept[c];
  mean_gap /= static_cast<double>(kept.size() - 1);
  fit.wavenumber = M_PI / mean_gap;

  // envelope fit log v = log C + delta log r - a r, with the |cos| offset of
  // sampled extrema corrected iteratively
  const int n = static_cast<int>(er.size());
  Matrix A(n, 3);
  Vector b(n);
  for (int i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = std::log(er[i]);
    A(i, 2) = -er[i];
    b[i] = std::log(ev[i]);
  }
  Vector coef = (A.transpose() * A).ldlt().solve(A.transpose() * b);
  for (int pass = 0; pass < 3; ++pass) {
    Vector bc = b;
    for (int i = 0; i < n; ++i) {
      const double t = (coef[1] / er[i] - coef[2]) / fit.wavenumber;
      bc[i] += 0.5 * std::log1p(t * t);
    }
    coef = (A.transpose() * A).ldlt().solve(A.transpose() * bc);
  }
  fit.delta = coef[1];
  fit.decay = coef[2];

  // amplitudes by linear least squares over the window with (a, k, delta) fixed
  {
    double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0, ss = 0;
    for (int i = 0; i < M; ++i) {
      if (r[i] < fit.window_lo || r[i] > fit.window_hi) continue;
      const double env = std::pow(r[i], fit.delta) * std::exp(-fit.decay * r[i]);
      const double pc = env * std::cos(fit.wavenumber * r[i]);
      const double ps = env * std::sin(fit.wavenumber * r[i]);
      s11 += pc * pc;
      s12 += pc * ps;
      s22 += ps * ps;
      t1 += pc * u[i];
      t2 += ps * u[i];
      ss += u[i] * u[i];
    }
    const double det = s11 * s22 - s12 * s12;
    if (det > 0) {
      fit.C1 = (s22 * t1 - s12 * t2) / det;
      fit.C2 = (s11 * t2 - s12 * t1) / det;
    }
  }
  // rms misfit of the corrected log-envelope at the extrema
  {
    double ss = 0;
    for (int i = 0; i < n; ++i) {
      const double t = (fit.delta / er[i] - fit.decay) / fit.wavenumber;
      const double pred = coef[0] + fit.delta * std::log(er[i]) - fit.decay * er[i] -
                          0.5 * std::log1p(t * t);
      ss += (pred - std::log(ev[i])) * (pred - std::log(ev[i]));
    }
    fit.residual = std::sqrt(ss / n);
  }
  return fit;
}

SignStructure sign_structure(const RadialField& U) {
  if (!U.grid) throw Error("sign_structure: field without grid");
  const RadialGrid& g = *U.grid;
  const Vector& u = U.values;
  SignStructure out;
  const double peak = u.cwiseAbs().maxCoeff();
  if (!(peak > 0)) return out;
  const double floor = peak * 1e-9;
  for (int i = 0; i + 1 < g.size(); ++i) {
    if (u[i] * u[i + 1] < 0 && std::max(std::abs(u[i]), std::abs(u[i + 1])) > floor) {
      if (out.sign_changes == 0) {
        const double t = u[i] / (u[i] - u[i + 1]);
        out.first_zero = g.nodes()[i] + t * g.spacing();
      }
      ++out.sign_changes;
    }
  }
  return out;
}

} // namespace bnls
