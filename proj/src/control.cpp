// SPDX-License-Identifier: Apache-2.0
#include "hrd/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hrd/error.hpp"

namespace hrd {

double ControlBasis::temporal(int hat, double t, double final_time) const {
  if (time_hats == 1) return 1.0;
  const double width = final_time / (time_hats - 1);
  const double node = hat * width;
  return std::max(0.0, 1.0 - std::abs(t - node) / width);
}

void ControlBasis::validate(const SpatialDiscretization& disc) const {
  if (time_hats < 1)
    throw Error(ErrorCode::InvalidConfig, "need at least one time hat",
                "control.time_hats");
  if (spatial_modes.empty())
    throw Error(ErrorCode::InvalidConfig, "need at least one spatial mode",
                "control.spatial_modes");
  const std::size_t n = disc.node_count();
  if (mode == ControlMode::Boundary) {
    bool any = false;
    for (std::size_t j = 0; j < disc.components(); ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const auto& label = disc.boundaries().labels[j][i];
        any = any || (label && *label == BoundaryKind::Neumann);
      }
    if (!any)
      throw Error(ErrorCode::EmptyBoundary,
                  "boundary control requires at least one Neumann node",
                  "control.mode");
  }
  for (std::size_t k = 0; k < spatial_modes.size(); ++k) {
    const std::string path = "control.spatial_modes[" + std::to_string(k) + "]";
    const Field& f = spatial_modes[k];
    if (f.size() != disc.field_size())
      throw Error(ErrorCode::InvalidConfig, "mode does not match the grid", path);
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
      if (!std::isfinite(f[idx]))
        throw Error(ErrorCode::InvalidConfig, "mode must be finite", path);
      if (mode == ControlMode::Boundary && f[idx] != 0.0) {
        const auto& label = disc.boundaries().labels[idx / n][idx % n];
        if (!label || *label != BoundaryKind::Neumann)
          throw Error(ErrorCode::InvalidConfig,
                      "boundary mode is nonzero off the Neumann boundary", path);
      }
    }
  }
}

void ControlSpec::validate(const SpatialDiscretization& disc) const {
  basis.validate(disc);
  if (coefficients.size() != basis.size())
    throw Error(ErrorCode::InvalidConfig,
                "expected " + std::to_string(basis.size()) + " coefficients",
                "control.coefficients");
  for (double c : coefficients)
    if (!std::isfinite(c))
      throw Error(ErrorCode::InvalidConfig, "coefficients must be finite",
                  "control.coefficients");
}

Field control_values(const ControlSpec& spec, double t, double final_time) {
  const auto& basis = spec.basis;
  Field g(basis.spatial_modes.front().size(), 0.0);
  for (std::size_t m = 0; m < basis.spatial_modes.size(); ++m)
    for (int hat = 0; hat < basis.time_hats; ++hat) {
      const double c = spec.coefficients[m * basis.time_hats + hat];
      if (c == 0.0) continue;
      const double weight = c * basis.temporal(hat, t, final_time);
      if (weight == 0.0) continue;
      const Field& mode = basis.spatial_modes[m];
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += weight * mode[i];
    }
  return g;
}

double control_inner(const SpatialDiscretization& disc, ControlMode mode,
                     std::span<const double> g, std::span<const double> h) {
  if (mode == ControlMode::Distributed) return disc.inner(g, h);
  const auto bw = disc.boundary_quadrature();
  const std::size_t n = disc.node_count();
  double sum = 0.0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) sum += bw[idx % n] * g[idx] * h[idx];
  return sum;
}

double control_norm_squared(const SpatialDiscretization& disc, ControlMode mode,
                            std::span<const double> g) {
  return control_inner(disc, mode, g, g);
}

SourceSeries apply_B(const SpatialDiscretization& disc, const ControlSpec& spec,
                     const SolverConfig& solver) {
  spec.validate(disc);
  const auto times = solver.time_grid();
  const std::size_t n = disc.node_count();
  const auto quad = disc.quadrature();
  const auto bw = disc.boundary_quadrature();
  SourceSeries out;
  out.reserve(times.size());
  for (double t : times) {
    Field g = control_values(spec, t, solver.final_time);
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      const std::size_t j = idx / n, i = idx % n;
      if (disc.is_dirichlet(j, i)) {
        g[idx] = 0.0;
      } else if (spec.basis.mode == ControlMode::Boundary) {
        g[idx] = g[idx] == 0.0 ? 0.0 : bw[i] * g[idx] / quad[i];
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

void ControlProblem::validate() const {
  model.validate();
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw Error(ErrorCode::InvalidConfig, "must be positive", "control.kappa");
  const std::size_t expected = static_cast<std::size_t>(model.solver.steps) + 1;
  if (target.size() != expected)
    throw Error(ErrorCode::InvalidConfig, "target must be sampled on the solver grid",
                "control.target");
  for (const auto& y : target)
    if (y.size() != model.disc->field_size())
      throw Error(ErrorCode::InvalidConfig, "target does not match the grid",
                  "control.target");
}

namespace {

double regularization_sum(const ControlProblem& problem, const ControlSpec& spec,
                          const ControlSpec* other) {
  const auto& disc = *problem.model.disc;
  const auto& solver = problem.model.solver;
  const auto times = solver.time_grid();
  const double dt = solver.dt();
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const Field g = control_values(spec, times[k], solver.final_time);
    if (other) {
      const Field h = control_values(*other, times[k], solver.final_time);
      sum += dt * control_inner(disc, spec.basis.mode, g, h);
    } else {
      sum += dt * control_norm_squared(disc, spec.basis.mode, g);
    }
  }
  return sum;
}

}  // namespace

CostBreakdown evaluate_cost(const ControlProblem& problem, const ControlSpec& spec) {
  const auto& disc = *problem.model.disc;
  CostBreakdown out;
  out.trajectory = solve_state(problem.model, apply_B(disc, spec, problem.model.solver));
  const double dt = problem.model.solver.dt();
  Field diff(disc.field_size());
  for (std::size_t k = 1; k < out.trajectory.size(); ++k) {
    for (std::size_t i = 0; i < diff.size(); ++i)
      diff[i] = out.trajectory.states[k][i] - problem.target[k][i];
    const double n = disc.norm(diff);
    out.tracking += 0.5 * dt * n * n;
  }
  out.regularization = 0.5 * problem.kappa * regularization_sum(problem, spec, nullptr);
  out.total = out.tracking + out.regularization;
  return out;
}

double reduced_cost(const ControlProblem& problem, const ControlSpec& spec) {
  return evaluate_cost(problem, spec).total;
}

namespace {

double directional_from_base(const ControlProblem& problem, const ControlSpec& spec,
                             const Trajectory& base,
                             const std::vector<double>& direction) {
  const auto& disc = *problem.model.disc;
  if (direction.size() != spec.coefficients.size())
    throw Error(ErrorCode::ShapeMismatch, "direction length differs from the basis size");
  if (std::all_of(direction.begin(), direction.end(), [](double d) { return d == 0.0; }))
    return 0.0;
  ControlSpec dir{spec.basis, direction};
  const SourceSeries h = apply_B(disc, dir, problem.model.solver);
  const SensitivityRecord zeta = solve_sensitivity(problem.model, {&base, h});
  const double dt = problem.model.solver.dt();
  double sum = 0.0;
  Field diff(disc.field_size());
  for (std::size_t k = 1; k < base.size(); ++k) {
    for (std::size_t i = 0; i < diff.size(); ++i)
      diff[i] = base.states[k][i] - problem.target[k][i];
    sum += dt * disc.inner(diff, zeta.zeta[k]);
  }
  return sum + problem.kappa * regularization_sum(problem, spec, &dir);
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double reduced_cost_directional_derivative(const ControlProblem& problem,
                                           const ControlSpec& spec,
                                           const std::vector<double>& direction) {
  const Trajectory base =
      solve_state(problem.model, apply_B(*problem.model.disc, spec, problem.model.solver));
  return directional_from_base(problem, spec, base, direction);
}

std::vector<double> reduced_gradient(const ControlProblem& problem,
                                     const ControlSpec& spec) {
  const Trajectory base =
      solve_state(problem.model, apply_B(*problem.model.disc, spec, problem.model.solver));
  std::vector<double> g(spec.coefficients.size());
  std::vector<double> e(spec.coefficients.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    e[i] = 1.0;
    g[i] = directional_from_base(problem, spec, base, e);
    e[i] = 0.0;
  }
  return g;
}

OptimizationResult optimize(const ControlProblem& problem, const ControlSpec& initial,
                            const OptimizerOptions& options) {
  problem.validate();
  initial.validate(*problem.model.disc);
  OptimizationResult result;
  result.spec = initial;
  ControlSpec& current = result.spec;
  double cost = reduced_cost(problem, current);
  std::vector<double> grad = reduced_gradient(problem, current);
  result.history.push_back({0, cost, inf_norm(grad), 0.0});

  std::vector<double> prev_coeffs, prev_grad;
  double step = options.initial_step;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    if (inf_norm(grad) <= options.tolerance) {
      result.converged = true;
      result.message = "gradient tolerance reached";
      return result;
    }
    if (!prev_coeffs.empty()) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < grad.size(); ++i) {
        const double s = current.coefficients[i] - prev_coeffs[i];
        const double y = grad[i] - prev_grad[i];
        ss += s * s;
        sy += s * y;
      }
      step = sy > 0.0 ? ss / sy : 2.0 * step;
    }
    std::vector<double> direction(grad.size());
    for (std::size_t i = 0; i < grad.size(); ++i) direction[i] = -grad[i];
    // One-sided slope along the candidate step.
    const double slope = reduced_cost_directional_derivative(problem, current, direction);
    if (!(slope < 0.0)) {
      result.stalled = true;
      result.message = "no descent along the negative gradient (one-sided slope >= 0)";
      return result;
    }
    bool accepted = false;
    ControlSpec trial = current;
    double trial_cost = cost;
    for (int halving = 0; halving <= options.max_halvings; ++halving) {
      for (std::size_t i = 0; i < grad.size(); ++i)
        trial.coefficients[i] = current.coefficients[i] + step * direction[i];
      try {
        trial_cost = reduced_cost(problem, trial);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Blowup && e.code() != ErrorCode::NonContraction) throw;
        trial_cost = std::numeric_limits<double>::infinity();
      }
      if (trial_cost <= cost + options.armijo_c * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.stalled = true;
      result.message = "line search failed after " +
                       std::to_string(options.max_halvings) + " halvings";
      return result;
    }
    prev_coeffs = current.coefficients;
    prev_grad = grad;
    current = trial;
    cost = trial_cost;
    grad = reduced_gradient(problem, current);
    result.history.push_back({iter, cost, inf_norm(grad), step});
  }
  result.converged = inf_norm(grad) <= options.tolerance;
  result.message = result.converged ? "gradient tolerance reached"
                                    : "iteration limit reached";
  return result;
}

StabilityReport stability_study(const ControlProblem& problem, const ControlSpec& spec,
                                const std::vector<std::vector<double>>& sequence) {
  const auto& disc = *problem.model.disc;
  const auto& solver = problem.model.solver;
  const Trajectory base = solve_state(problem.model, apply_B(disc, spec, solver));
  const double s_norm = problem.model.s.norm(disc);
  StabilityReport report;
  for (const auto& coeffs : sequence) {
    ControlSpec member{spec.basis, coeffs};
    const Trajectory traj = solve_state(problem.model, apply_B(disc, member, solver));
    StabilityRow row;
    row.state_deviation = max_state_deviation(disc, traj.states, base.states);
    for (std::size_t k = 0; k < traj.size(); ++k)
      row.z_deviation = std::max(
          row.z_deviation, std::abs(traj.hysteresis.value(k) - base.hysteresis.value(k)));
    row.z_bound = 2.0 * s_norm * row.state_deviation;
    row.bound_holds = row.z_deviation <= row.z_bound * (1.0 + 1e-12) + 1e-300;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace hrd
