#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bnls/radial_grid.hpp"

namespace bnls {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details; // measured values with their tolerances
};

struct AcceptanceOptions {
  int dim = 2;
  double radius = 27.0;
  int nodes = 1024;
  std::uint64_t seed = 2024;
};

/// Runs the full verification suite (10 criteria). Each criterion prints
/// one "[PASS]/[FAIL]" line to `progress` when given. Never throws:
/// failures and exceptions become failed criteria.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            std::ostream* progress);

} // namespace bnls
