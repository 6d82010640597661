#pragma once

#include "bnls/scalar_solver.hpp"
#include "bnls/spectral.hpp"

namespace bnls {

enum class Verdict { StrictLocalMin, Saddle, Degenerate };

const char* to_string(Verdict v);

/// Morse classification of a semi-trivial state u_j on the Nehari manifold:
/// strict local minimum iff beta < S_j^2, saddle iff beta > S_j^2; equality
/// within 1e-8 is reported as degenerate rather than guessed.
struct Classification {
  int which = 1; // 1: (U1, 0), 2: (0, U2)
  Verdict verdict = Verdict::Degenerate;
  double sobolev_sq = 0;        // S_j^2
  double quadratic_form = 0;    // ||h||_k^2 - beta \int U_j^2 h^2 at the witness
  RadialField witness;          // minimizing direction of the S_j^2 quotient
};

struct MountainPassResult {
  std::vector<StatePair> path;   // beads on the Nehari manifold
  std::vector<double> energies;  // J along the path
  SolveResult saddle;            // polished max-energy critical point
  double level = 0;              // mp level c = max bead energy
  int sweeps = 0;
};

/// (U1, 0) and (0, U2) built from the rescaled scalar ground state.
std::pair<SolveResult, SolveResult> semitrivial_states(const ModelParams& p,
                                                       GridPtr grid,
                                                       const SolveOptions& opts = {});

Classification classify_semitrivial(int which, const ModelParams& p,
                                    const SobolevConstants& constants);

/// Projected-gradient minimization of J on the Nehari manifold from the
/// coupled seed (U1, U2); reports FellToSemitrivial via the result flags
/// when one component loses its L4 mass.
SolveResult solve_global_min(const ModelParams& p, GridPtr grid,
                             const SolveOptions& opts = {});

/// Elastic-string (NEB-style) search for the mountain-pass point between
/// the two semi-trivial states, followed by a Newton polish of the
/// max-energy bead.
MountainPassResult solve_mountain_pass(const ModelParams& p, GridPtr grid,
                                       const SolveOptions& opts = {});

/// L2 norms of the two strong-form residuals of system (per component).
std::pair<double, double> residual_check(const StatePair& u, const ModelParams& p);

} // namespace bnls
