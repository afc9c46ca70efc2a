// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "hrd/evolution.hpp"
#include "hrd/sensitivity.hpp"

namespace hrd {

enum class ControlMode {
  Distributed,  // acts on the whole domain with the L2 pairing
  Boundary,     // acts on Neumann boundary nodes with the surface measure
};

/// Tensor basis: `time_hats` piecewise-linear hat functions on a uniform
/// partition of [0,T] times each spatial mode. Basis index
/// i = mode * time_hats + hat. A single hat is the constant function.
struct ControlBasis {
  ControlMode mode = ControlMode::Distributed;
  int time_hats = 1;
  /// Control-value fields (component-major like states). In boundary mode
  /// they must vanish away from Neumann boundary nodes.
  std::vector<Field> spatial_modes;

  std::size_t size() const { return time_hats * spatial_modes.size(); }
  double temporal(int hat, double t, double final_time) const;
  void validate(const SpatialDiscretization& disc) const;
};

struct ControlSpec {
  ControlBasis basis;
  std::vector<double> coefficients;

  void validate(const SpatialDiscretization& disc) const;
};

/// Control values g(t, .) on the nodes.
Field control_values(const ControlSpec& spec, double t, double final_time);

/// Squared control norm in the mode's measure (domain or boundary).
double control_norm_squared(const SpatialDiscretization& disc, ControlMode mode,
                            std::span<const double> g);
double control_inner(const SpatialDiscretization& disc, ControlMode mode,
                     std::span<const double> g, std::span<const double> h);

/// Source density B g sampled on the solver grid. Distributed controls pass
/// through unchanged; boundary controls become bw_i g_i / quad_i on
/// Neumann nodes so that the quadrature load equals the boundary pairing.
SourceSeries apply_B(const SpatialDiscretization& disc, const ControlSpec& spec,
                     const SolverConfig& solver);

struct ControlProblem {
  Model model;
  std::vector<Field> target;  // y_d on the solver grid
  double kappa = 1e-2;

  void validate() const;
};

struct CostBreakdown {
  double total = 0.0;
  double tracking = 0.0;        // 1/2 sum_{k=1..N} dt |y_k - yd_k|^2
  double regularization = 0.0;  // kappa/2 sum_{k=0..N-1} dt |g_k|^2
  Trajectory trajectory;
};

CostBreakdown evaluate_cost(const ControlProblem& problem, const ControlSpec& spec);
double reduced_cost(const ControlProblem& problem, const ControlSpec& spec);

/// J'(u; h) through one sensitivity solve with direction B h.
double reduced_cost_directional_derivative(const ControlProblem& problem,
                                           const ControlSpec& spec,
                                           const std::vector<double>& direction);

/// g_i = J'(u; e_i) for every basis function.
std::vector<double> reduced_gradient(const ControlProblem& problem,
                                     const ControlSpec& spec);

struct OptimizerOptions {
  int max_iterations = 200;
  double armijo_c = 1e-4;
  double tolerance = 1e-8;   // on max_i |g_i|
  double initial_step = 1.0;
  int max_halvings = 40;
};

struct OptimizationStep {
  int iteration = 0;
  double cost = 0.0;
  double grad_inf = 0.0;
  double step = 0.0;  // accepted step length (0 for the initial record)
};

struct OptimizationResult {
  ControlSpec spec;
  std::vector<OptimizationStep> history;
  bool converged = false;
  bool stalled = false;
  std::string message;
};

/// Steepest descent on the coefficient vector with Armijo backtracking.
/// The trial step starts from the Barzilai-Borwein length of the previous
/// iterate pair. A failed line search is reported through `stalled` and the
/// best iterate is returned.
OptimizationResult optimize(const ControlProblem& problem, const ControlSpec& initial,
                            const OptimizerOptions& options = {});

struct StabilityRow {
  double state_deviation = 0.0;  // max_k |y_n,k - y_k|_quad
  double z_deviation = 0.0;      // max_k |z_n,k - z_k|
  double z_bound = 0.0;          // 2 |S| state_deviation
  bool bound_holds = true;
};

/// Strong-perturbation stability of (y, z) along coefficient sequences
/// u_n -> u. Weak convergence is not assessed numerically.
struct StabilityReport {
  std::vector<StabilityRow> rows;
  std::string note = "strong perturbations only; weak convergence not assessed";
};

StabilityReport stability_study(const ControlProblem& problem, const ControlSpec& spec,
                                const std::vector<std::vector<double>>& sequence);

}  // namespace hrd
