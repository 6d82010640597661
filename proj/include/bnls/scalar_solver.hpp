#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bnls/energy.hpp"

namespace bnls {

struct SolveOptions {
  double tol = 1e-8;            // strong residual target, absolute L2
  int max_iter = 5000;          // projected-gradient iteration cap
  double descent_tol = 1e-6;    // hand-off point to the Newton polish
  int newton_cap = 30;
  std::uint64_t seed = 0;       // 0: plain Gaussian seed; else randomized start
  bool newton_polish = true;
  bool allow_nonconverged = false; // return instead of throwing NonConvergence
  int beads = 17;               // string-method path resolution
  int reparam_every = 10;       // sweeps between re-parametrizations
  int max_sweeps = 400;         // string-method sweep cap
};

enum class StateTag { ScalarGround, SemiTrivial, Coupled, SaddleCandidate };

const char* to_string(StateTag tag);

struct SolveResult {
  StatePair state;          // scalar solves keep u2 = 0
  EnergyReport energy;
  double residual = 0;      // strong residual, L2 norm
  int iterations = 0;
  bool converged = false;
  double multiplier = 0;    // constrained-multiplier estimate
  StateTag tag = StateTag::ScalarGround;
  bool fell_to_semitrivial = false;
  std::string note;
};

/// Ground state of Delta^2 u + lambda u = mu u^3 by preconditioned
/// projected-gradient descent on the scalar Nehari set, then a guarded
/// Newton polish of the strong equation. Sign convention: u(0) > 0.
SolveResult solve_scalar_ground_state(double lambda, double mu, GridPtr grid,
                                      const SolveOptions& opts = {});

/// max relative spread of the energy level over n randomized starts
double scalar_multistart_spread(double lambda, double mu, GridPtr grid,
                                const SolveOptions& opts, int n_seeds,
                                std::vector<double>* levels = nullptr);

/// U_{lambda,mu}(r) = sqrt(lambda/mu) U(lambda^{1/4} r) interpolated onto
/// the target grid; U must be the (1,1) ground state on a domain wide
/// enough that lambda^{1/4} R_target <= R_source.
RadialField rescale_ground_state(const RadialField& U, double lambda, double mu,
                                 GridPtr target);

/// Exponential-oscillatory tail parameters fitted from log|U| extrema and
/// zero crossings: |U| ~ C r^delta e^{-a r} |cos(k r + phase)|.
struct TailFit {
  double window_lo = 0, window_hi = 0;
  double decay = 0;      // a
  double wavenumber = 0; // k
  double delta = 0;      // envelope exponent
  double C1 = 0, C2 = 0;
  double residual = 0;   // rms misfit of log-envelope at the extrema
  std::vector<double> crossings;
  int extrema_used = 0;
};

TailFit tail_fit(const RadialField& U, int dim);

struct SignStructure {
  int sign_changes = 0;
  double first_zero = 0; // 0 when no sign change
};

SignStructure sign_structure(const RadialField& U);

/// deterministic uniform stream used by all randomized starts
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed);
  double uniform(double lo, double hi);

private:
  std::uint64_t state_;
};

/// smooth random bump field (sum of three Gaussians), centers in [0, R/2]
Vector random_bump_field(const RadialGrid& g, RandomStream& rs);

} // namespace bnls
