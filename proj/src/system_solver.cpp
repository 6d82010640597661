#include "bnls/system_solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>

#include "bnls/errors.hpp"

namespace bnls {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::StrictLocalMin: return "strict-local-min";
    case Verdict::Saddle: return "saddle";
    case Verdict::Degenerate: return "degenerate";
  }
  return "unknown";
}

namespace {

struct SystemWork {
  const RadialGrid& g;
  ModelParams p;
  Eigen::SimplicialLDLT<SparseMatrix> pre1, pre2;

  SystemWork(const RadialGrid& grid, const ModelParams& params)
      : g(grid), p(params) {
    pre1.compute(g.shifted_stiffness(p.lambda1));
    pre2.compute(g.shifted_stiffness(p.lambda2));
    if (pre1.info() != Eigen::Success || pre2.info() != Eigen::Success)
      throw SolverBreakdown("LDLT factorization of Delta^2 + lambda_j failed");
  }

  void project(Vector& u1, Vector& u2) const {
    const double t = nehari_scale(g, u1, u2, p);
    u1 *= t;
    u2 *= t;
  }

  double grad_norm(const Vector& u1, const Vector& u2, Vector& r1, Vector& r2) const {
    gradient(g, u1, u2, p, r1, r2);
    return std::sqrt(g.inner(r1, r1) + g.inner(r2, r2));
  }

  double strong_residual(const Vector& u1, const Vector& u2) const {
    Vector rhs1(g.size()), rhs2(g.size());
    for (int i = 0; i < g.size(); ++i) {
      rhs1[i] = p.mu1 * u1[i] * u1[i] * u1[i] + p.beta * u2[i] * u2[i] * u1[i];
      rhs2[i] = p.mu2 * u2[i] * u2[i] * u2[i] + p.beta * u1[i] * u1[i] * u2[i];
    }
    const double a = g.strong_residual_norm(u1, p.lambda1, rhs1);
    const double b = g.strong_residual_norm(u2, p.lambda2, rhs2);
    return std::sqrt(a * a + b * b);
  }

  /// Newton iteration on the coupled strong system; returns the achieved
  /// residual and keeps the best iterate. The Jacobian of the weighted
  /// residual is symmetric, generally indefinite near saddles.
  double newton(Vector& u1, Vector& u2, int cap) const {
    const int M = g.size();
    const Vector& w = g.weights();
    double best = strong_residual(u1, u2);
    Vector b1 = u1, b2 = u2;
    Eigen::SparseLU<SparseMatrix> lu;
    for (int k = 0; k < cap; ++k) {
      if (best < 1e-12) break;
      SparseMatrix K1 = g.shifted_stiffness(p.lambda1);
      SparseMatrix K2 = g.shifted_stiffness(p.lambda2);
      std::vector<Eigen::Triplet<Scalar>> trip;
      trip.reserve(8 * M + K1.nonZeros() + K2.nonZeros());
      for (int j = 0; j < K1.outerSize(); ++j)
        for (SparseMatrix::InnerIterator it(K1, j); it; ++it)
          trip.emplace_back(static_cast<int>(it.row()), j, it.value());
      for (int j = 0; j < K2.outerSize(); ++j)
        for (SparseMatrix::InnerIterator it(K2, j); it; ++it)
          trip.emplace_back(M + static_cast<int>(it.row()), M + j, it.value());
      for (int i = 0; i < M; ++i) {
        trip.emplace_back(i, i,
                          -w[i] * (3.0 * p.mu1 * u1[i] * u1[i] + p.beta * u2[i] * u2[i]));
        trip.emplace_back(M + i, M + i,
                          -w[i] * (3.0 * p.mu2 * u2[i] * u2[i] + p.beta * u1[i] * u1[i]));
        const double c = -w[i] * 2.0 * p.beta * u1[i] * u2[i];
        trip.emplace_back(i, M + i, c);
        trip.emplace_back(M + i, i, c);
      }
      SparseMatrix A(2 * M, 2 * M);
      A.setFromTriplets(trip.begin(), trip.end());
      lu.compute(A);
      if (lu.info() != Eigen::Success) break;
      Vector r1, r2;
      gradient(g, u1, u2, p, r1, r2);
      Vector rhs(2 * M);
      for (int i = 0; i < M; ++i) {
        rhs[i] = w[i] * r1[i];
        rhs[M + i] = w[i] * r2[i];
      }
      Vector delta = lu.solve(rhs);
      u1 -= delta.head(M);
      u2 -= delta.tail(M);
      const double rn = strong_residual(u1, u2);
      if (rn < best) {
        best = rn;
        b1 = u1;
        b2 = u2;
      } else if (rn > 0.5 * best) {
        break;
      }
    }
    u1 = b1;
    u2 = b2;
    return best;
  }
};

SolveResult finish_result(const SystemWork& work, GridPtr grid, Vector u1,
                          Vector u2, int iters, const SolveOptions& opts,
                          StateTag tag) {
  SolveResult out;
  out.residual = work.strong_residual(u1, u2);
  out.state = StatePair(std::move(grid), std::move(u1), std::move(u2));
  out.energy = eval_energies(out.state, work.p);
  out.iterations = iters;
  out.converged = out.residual < opts.tol;
  out.multiplier = multiplier_estimate(out.state, work.p);
  out.tag = tag;
  const double q1 = work.g.integrate_power(out.state.u1, 4);
  const double q2 = work.g.integrate_power(out.state.u2, 4);
  const double qt = q1 + q2;
  if (qt > 0 && std::min(q1, q2) < 1e-10 * qt) {
    out.fell_to_semitrivial = true;
    out.tag = StateTag::SemiTrivial;
    out.note = q1 < q2 ? "component 1 collapsed" : "component 2 collapsed";
  }
  return out;
}

} // namespace

std::pair<SolveResult, SolveResult> semitrivial_states(const ModelParams& p,
                                                       GridPtr grid,
                                                       const SolveOptions& opts) {
  p.validate();
  // one (1,1) ground state, rescaled to each component's parameters
  SolveResult base = solve_scalar_ground_state(1.0, 1.0, grid, opts);
  RadialField U(grid, base.state.u1);
  const int M = grid->size();

  auto make = [&](int which) {
    const double lam = which == 1 ? p.lambda1 : p.lambda2;
    const double mu = which == 1 ? p.mu1 : p.mu2;
    RadialField Uj = (lam == 1.0 && mu == 1.0)
                         ? U
                         : rescale_ground_state(U, lam, mu, grid);
    SystemWork work(*grid, p);
    Vector u1 = which == 1 ? Uj.values : Vector(Vector::Zero(M));
    Vector u2 = which == 2 ? Uj.values : Vector(Vector::Zero(M));
    // the rescaled field is only O(interpolation) accurate: polish in place
    work.newton(u1, u2, opts.newton_cap);
    SolveResult r = finish_result(work, grid, u1, u2, base.iterations, opts,
                                  StateTag::SemiTrivial);
    r.fell_to_semitrivial = false; // semi-trivial by construction
    r.tag = StateTag::SemiTrivial;
    if (!r.converged && !opts.allow_nonconverged)
      throw NonConvergence("semi-trivial state residual " +
                           std::to_string(r.residual));
    return r;
  };
  return {make(1), make(2)};
}

Classification classify_semitrivial(int which, const ModelParams& p,
                                    const SobolevConstants& constants) {
  if (which != 1 && which != 2) throw Error("classify_semitrivial: which in {1,2}");
  Classification out;
  out.which = which;
  out.sobolev_sq = which == 1 ? constants.S1 : constants.S2;
  out.witness = which == 1 ? constants.phi1 : constants.phi2;
  const double gap = out.sobolev_sq - p.beta;
  if (std::abs(gap) < 1e-8) {
    out.verdict = Verdict::Degenerate;
    throw DegenerateThreshold("beta within 1e-8 of S_j^2 = " +
                              std::to_string(out.sobolev_sq));
  }
  out.verdict = gap > 0 ? Verdict::StrictLocalMin : Verdict::Saddle;
  if (out.witness.grid) {
    const RadialGrid& g = *out.witness.grid;
    const double lam_k = which == 1 ? p.lambda2 : p.lambda1;
    const double n2 = g.norm_h2(out.witness.values, lam_k);
    // \int U_j^2 h^2 equals n2 / S_j^2 at the quotient minimizer
    out.quadratic_form = n2 * (1.0 - p.beta / out.sobolev_sq);
  }
  return out;
}

SolveResult solve_global_min(const ModelParams& p, GridPtr grid,
                             const SolveOptions& opts) {
  p.validate();
  if (!(p.beta > -std::sqrt(p.mu1 * p.mu2)))
    throw NonAdmissibleDirection("beta <= -sqrt(mu1 mu2): Nehari scale undefined");
  auto [st1, st2] = semitrivial_states(p, grid, opts);
  SystemWork work(*grid, p);
  const RadialGrid& g = *grid;
  const Vector& w = g.weights();

  Vector u1 = st1.state.u1, u2 = st2.state.u2; // coupled seed (U1, U2)
  work.project(u1, u2);

  int iters = 0;
  Vector r1, r2, d1, d2;
  for (; iters < opts.max_iter; ++iters) {
    const double gn = work.grad_norm(u1, u2, r1, r2);
    if (gn < opts.descent_tol) break;
    d1 = work.pre1.solve((w.array() * r1.array()).matrix());
    d2 = work.pre2.solve((w.array() * r2.array()).matrix());
    const double slope = g.inner(r1, d1) + g.inner(r2, d2);
    const double e0 = eval_energies(g, u1, u2, p).J;
    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      Vector v1 = u1 - step * d1, v2 = u2 - step * d2;
      try {
        const double t = nehari_scale(g, v1, v2, p);
        v1 *= t;
        v2 *= t;
        if (eval_energies(g, v1, v2, p).J <= e0 - 1e-4 * step * slope) {
          u1 = v1;
          u2 = v2;
          accepted = true;
          break;
        }
      } catch (const NonAdmissibleDirection&) {
        // step left the admissible cone; shorten
      } catch (const ZeroState&) {
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  if (opts.newton_polish) work.newton(u1, u2, opts.newton_cap);
  SolveResult out =
      finish_result(work, grid, u1, u2, iters, opts, StateTag::Coupled);
  if (!out.converged && !opts.allow_nonconverged)
    throw NonConvergence("global minimization stalled at residual " +
                         std::to_string(out.residual));
  return out;
}

namespace {

std::vector<StatePair> reparametrize(const SystemWork& work, GridPtr grid,
                                     const std::vector<StatePair>& beads) {
  const RadialGrid& g = work.g;
  const int n = static_cast<int>(beads.size());
  std::vector<double> arc(n, 0.0);
  for (int i = 1; i < n; ++i) {
    Vector da = beads[i].u1 - beads[i - 1].u1;
    Vector db = beads[i].u2 - beads[i - 1].u2;
    arc[i] = arc[i - 1] + std::sqrt(g.inner(da, da) + g.inner(db, db));
  }
  const double total = arc[n - 1];
  if (!(total > 0)) throw PathCollapse("string collapsed to a point");
  std::vector<StatePair> out;
  out.push_back(beads.front());
  for (int i = 1; i < n - 1; ++i) {
    const double s = total * i / (n - 1.0);
    int j = 0;
    while (j + 2 < n && arc[j + 1] < s) ++j;
    const double t = (s - arc[j]) / std::max(arc[j + 1] - arc[j], 1e-300);
    Vector v1 = (1 - t) * beads[j].u1 + t * beads[j + 1].u1;
    Vector v2 = (1 - t) * beads[j].u2 + t * beads[j + 1].u2;
    work.project(v1, v2);
    out.emplace_back(grid, std::move(v1), std::move(v2));
  }
  out.push_back(beads.back());
  return out;
}

} // namespace

MountainPassResult solve_mountain_pass(const ModelParams& p, GridPtr grid,
                                       const SolveOptions& opts) {
  p.validate();
  auto [st1, st2] = semitrivial_states(p, grid, opts);
  SystemWork work(*grid, p);
  const RadialGrid& g = *grid;
  const Vector& w = g.weights();
  const int nb = std::max(5, opts.beads);

  std::vector<StatePair> beads;
  beads.reserve(nb);
  for (int b = 0; b < nb; ++b) {
    const double s = b / (nb - 1.0);
    if (b == 0) {
      beads.emplace_back(grid, st1.state.u1, Vector(Vector::Zero(g.size())));
    } else if (b == nb - 1) {
      beads.emplace_back(grid, Vector(Vector::Zero(g.size())), st2.state.u2);
    } else {
      Vector v1 = (1.0 - s) * st1.state.u1;
      Vector v2 = s * st2.state.u2;
      work.project(v1, v2);
      beads.emplace_back(grid, std::move(v1), std::move(v2));
    }
  }

  const double tau = 0.5;
  int sweeps = 0;
  Vector r1, r2;
  for (; sweeps < opts.max_sweeps; ++sweeps) {
    double move = 0;
    for (int b = 1; b < nb - 1; ++b) {
      gradient(g, beads[b].u1, beads[b].u2, p, r1, r2);
      Vector d1 = work.pre1.solve((w.array() * r1.array()).matrix());
      Vector d2 = work.pre2.solve((w.array() * r2.array()).matrix());
      Vector v1 = beads[b].u1 - tau * d1;
      Vector v2 = beads[b].u2 - tau * d2;
      work.project(v1, v2);
      Vector da = v1 - beads[b].u1, db = v2 - beads[b].u2;
      move = std::max(move, std::sqrt(g.inner(da, da) + g.inner(db, db)));
      beads[b] = StatePair(grid, std::move(v1), std::move(v2));
    }
    if (sweeps % opts.reparam_every == opts.reparam_every - 1)
      beads = reparametrize(work, grid, beads);
    if (move < 1e-9) break;
  }

  std::vector<double> energies(nb);
  int bmax = 0;
  for (int b = 0; b < nb; ++b) {
    energies[b] = eval_energies(g, beads[b].u1, beads[b].u2, p).J;
    if (energies[b] > energies[bmax]) bmax = b;
  }
  if (bmax == 0 || bmax == nb - 1)
    throw PathCollapse("max-energy bead sits at an endpoint");

  // polish the max-energy bead to a genuine critical point
  Vector s1 = beads[bmax].u1, s2 = beads[bmax].u2;
  const double res = work.newton(s1, s2, 60);
  SolveResult saddle =
      finish_result(work, grid, std::move(s1), std::move(s2), sweeps, opts,
                    StateTag::SaddleCandidate);
  if (!saddle.fell_to_semitrivial) saddle.tag = StateTag::SaddleCandidate;
  if (res >= opts.tol && !opts.allow_nonconverged)
    throw NonConvergence("mountain-pass polish stalled at residual " +
                         std::to_string(res));
  beads[bmax] = saddle.state;
  energies[bmax] = saddle.energy.J;

  MountainPassResult out;
  out.path = std::move(beads);
  out.energies = std::move(energies);
  out.level = out.energies[bmax];
  out.saddle = std::move(saddle);
  out.sweeps = sweeps;
  return out;
}

std::pair<double, double> residual_check(const StatePair& u, const ModelParams& p) {
  require_state(u);
  const RadialGrid& g = *u.grid;
  Vector rhs1(g.size()), rhs2(g.size());
  for (int i = 0; i < g.size(); ++i) {
    rhs1[i] = p.mu1 * std::pow(u.u1[i], 3) + p.beta * u.u2[i] * u.u2[i] * u.u1[i];
    rhs2[i] = p.mu2 * std::pow(u.u2[i], 3) + p.beta * u.u1[i] * u.u1[i] * u.u2[i];
  }
  return {g.strong_residual_norm(u.u1, p.lambda1, rhs1),
          g.strong_residual_norm(u.u2, p.lambda2, rhs2)};
}

} // namespace bnls
