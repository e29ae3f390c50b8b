#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qhkit/report.hpp"

namespace qhkit {

inline constexpr std::array<std::string_view, 6> kExperimentNames = {
    "bounds-suite", "halfspace-validation", "subinvariance", "slit-counterexample", "short-arc-image", "chain-suite",
};

struct Tolerances {
  double quadrature_tol = 1e-8;
  /// A bound B is considered to hold for a measured value v when
  /// v <= B * slack_factor + slack_additive (mirrored for lower bounds).
  double slack_factor = 1.05;
  double slack_additive = 1e-6;
};

/// Parsed experiment configuration. Fields left at 0 / empty take the
/// experiment's defaults.
///
/// {"name", "seed", "samples", "resolution", "domains": [domain spec, ..],
///  "map": map spec, "tolerances": {...}, "budget_seconds",
///  "record_wall_time", "params": {experiment-specific}}
struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double resolution = 0.0;
  std::vector<nlohmann::json> domains;
  std::optional<nlohmann::json> map;
  Tolerances tolerances;
  double budget_seconds = 120.0;
  bool record_wall_time = false;
  nlohmann::json params = nlohmann::json::object();
  /// The JSON the config was parsed from, echoed into reports.
  nlohmann::json source = nlohmann::json::object();
};

/// Validates the name, numeric fields and every referenced domain/map spec.
/// Throws kConfiguration.
ExperimentConfig parse_config(const nlohmann::json& j);

/// Reads and parses a config file; kIo when unreadable, kConfiguration when
/// malformed.
ExperimentConfig load_config(const std::string& path);

/// Runs the named pipeline. Hard-bound failures become rows with pass =
/// false; samples that cannot be evaluated are recorded as skipped. Samples
/// not started before the wall-time budget runs out are skipped with a note.
ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace qhkit
