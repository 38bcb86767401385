#pragma once

// Scenario configuration files (JSON, schema_version 1).
//
//   {
//     "schema_version": 1,
//     "name": "fig4_stable",
//     "geometry":   {"unit": "mm", "L0": 70, "b2": "70 - 60*sqrt(2)", ...},
//     "dynamics":   {"inertia": 4.2e-3, "viscosity": 0.1, "gain": 400,
//                    "theta_d": "pi/12", "epsilon": 1e-3,
//                    "theta_min": "-pi/180", "theta_max": "41pi/180"},
//     "simulation": {"theta_init": "pi/18", "omega_init": 0, "dt": 1e-4, "t_final": 10},
//     "stability":  {"theta0": "pi/8"}
//   }
//
// Scalars may be JSON numbers or arithmetic strings ("15/sqrt(2)"). Angles
// must carry a unit: a multiple of pi ("41pi/180") or a "deg"/"rad" suffix.
// Instead of "gain", dynamics may give "tensions": {"unit": "N", "v1": .., "v2": ..}
// plus an optional "tension_tolerance" (relative, default 0.02).

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "muscu/dynamics.hpp"
#include "muscu/geometry.hpp"

namespace muscu::cli {

inline constexpr int kSchemaVersion = 1;

/// Evaluates +, -, *, /, parentheses, `pi`, `sqrt(...)` and implicit
/// multiplication ("41pi"). Throws std::invalid_argument on bad input.
double eval_expression(std::string_view text);

/// Angle in radians from a unit-tagged string. Throws std::invalid_argument.
double parse_angle(std::string_view text);

struct SimulationBlock {
  double theta_init = 0;
  double omega_init = 0;
  double dt = 1e-4;
  double t_final = 0;
};

struct ScenarioConfig {
  std::string name;
  SystemParams geometry;  // meters
  DynParams dyn;          // gain already resolved when tensions were given
  std::optional<InternalForce> tensions;
  double tension_tolerance = 0.02;
  std::optional<SimulationBlock> simulation;
  std::optional<double> theta0;
  nlohmann::json document;  // the input, echoed into every output
};

/// Throws ConfigError whose assumption() names the offending field or
/// model check.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Compact single-line echo of the document.
std::string config_echo(const ScenarioConfig& cfg);

}  // namespace muscu::cli
