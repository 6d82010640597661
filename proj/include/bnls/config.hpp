#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "bnls/energy.hpp"
#include "bnls/scalar_solver.hpp"

namespace bnls {

inline constexpr const char* kVersion = "bnls 1.0.0";

struct GridSpec {
  double radius = 27.0;
  int nodes = 1024;
};

/// Schema-validated run configuration; unknown keys are rejected before
/// any compute happens.
struct RunConfig {
  ModelParams params;
  GridSpec grid;
  SolveOptions solver;
  std::string task;       // optional: solve-scalar, solve-system-min, ...
  std::string out_field;  // output paths (task-dependent)
  std::string out_report;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

nlohmann::json config_echo(const RunConfig& c);
nlohmann::json energy_to_json(const EnergyReport& e);

/// Report skeleton: config echo, artifact version, and the single
/// volatile header field ("run") holding timestamp and wall time.
nlohmann::json make_report(const RunConfig& c, double wall_seconds);

void write_json(const std::string& path, const nlohmann::json& j);

} // namespace bnls
