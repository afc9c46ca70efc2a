// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hrd/control.hpp"
#include "hrd/evolution.hpp"
#include "hrd/sensitivity.hpp"
#include "hrd/signal_io.hpp"

namespace hrd {

struct ControlBlock {
  ControlSpec spec;
  double kappa = 1e-2;
  std::vector<Field> target;
  std::vector<double> direction;  // sensitivity / fd-check direction
  OptimizerOptions optimizer;
};

struct DiagnosticBlock {
  std::vector<double> thetas{0.25, 0.5, 0.75};
  std::vector<double> t_grid;  // default: 200 log-spaced points on [1e-4, 10]
  double gamma = 0.5;
};

/// Fully validated scenario loaded from JSON.
struct Scenario {
  Model model;
  std::optional<ControlBlock> control;
  std::vector<double> lambdas{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  DiagnosticBlock diagnostic;
  std::uint64_t seed = 0;
  double alpha = 0.25;  // metadata
  double p = 2.0;       // metadata

  /// Source u = B(control coefficients), or zero without a control block.
  SourceSeries source() const;
  /// Source for the configured direction. Requires a control block.
  SourceSeries direction_source() const;
  ControlProblem control_problem() const;
};

/// Parses and validates. Throws Error whose field() names the offending
/// JSON path (e.g. "hysteresis.a").
Scenario parse_scenario(const std::string& json_text);

/// FNV-1a 64-bit hash of a byte string, hex encoded.
std::string content_hash(const std::string& bytes);

// Tabular views used by the command-line front end.
Table trajectory_table(const SpatialDiscretization& disc, const Trajectory& traj);
Table sensitivity_table(const SpatialDiscretization& disc, const SensitivityRecord& rec);
Table fd_table(const FdStudy& study);
Table history_table(const OptimizationResult& result);
Table diagnostic_table(const Scenario& scenario);

/// Binary per-node snapshot: little-endian uint32 header
/// {dimension, nx, ny, m, time_points} followed by row-major float64 data
/// indexed [time][component][node].
std::string trajectory_snapshot(const SpatialDiscretization& disc, const Trajectory& traj);

}  // namespace hrd
