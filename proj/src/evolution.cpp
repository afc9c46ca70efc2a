// SPDX-License-Identifier: Apache-2.0
#include "hrd/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hrd/error.hpp"

namespace hrd {

std::vector<double> SolverConfig::time_grid() const {
  std::vector<double> t(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) t[k] = final_time * k / steps;
  return t;
}

void SolverConfig::validate() const {
  if (!(final_time > 0.0) || !std::isfinite(final_time))
    throw Error(ErrorCode::InvalidConfig, "must be positive", "solver.final_time");
  if (steps < 1)
    throw Error(ErrorCode::InvalidConfig, "must be at least 1", "solver.steps");
  if (scheme == Scheme::PicardSliced) {
    if (slice_steps < 1)
      throw Error(ErrorCode::InvalidConfig,
                  "slice length must be a positive multiple of dt",
                  "solver.slice_steps");
    if (!(tolerance > 0.0))
      throw Error(ErrorCode::InvalidConfig, "must be positive", "solver.tolerance");
    if (max_iterations < 1)
      throw Error(ErrorCode::InvalidConfig, "must be at least 1",
                  "solver.max_iterations");
  }
}

SourceSeries zero_source(const SpatialDiscretization& disc, const SolverConfig& solver) {
  return SourceSeries(static_cast<std::size_t>(solver.steps) + 1, disc.zero_field());
}

void Model::validate() const {
  if (!disc) throw Error(ErrorCode::InvalidConfig, "missing discretization", "domain");
  s.validate(*disc);
  if (reaction.components != disc->components())
    throw Error(ErrorCode::InvalidConfig,
                "reaction has " + std::to_string(reaction.components) +
                    " components, domain has " + std::to_string(disc->components()),
                "reaction.components");
  reaction.validate();
  hysteresis.validate();
  solver.validate();
}

namespace {

void check_source(const Model& model, const SourceSeries& source) {
  const std::size_t expected = static_cast<std::size_t>(model.solver.steps) + 1;
  if (source.size() != expected)
    throw Error(ErrorCode::GridMismatch,
                "source has " + std::to_string(source.size()) +
                    " time samples, solver grid has " + std::to_string(expected));
  for (const auto& u : source) model.disc->check_shape(u, "source");
}

void guard_blowup(std::span<const double> y, std::size_t step) {
  for (double v : y)
    if (!std::isfinite(v) || std::abs(v) > blowup_threshold)
      throw Error(ErrorCode::Blowup,
                  "state exceeded 1e12 or became non-finite at step " +
                      std::to_string(step));
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

SliceSolution picard_slice_iterate(const SliceProblem& p) {
  const Model& model = *p.model;
  const auto& disc = *model.disc;
  const double dt = model.solver.dt();
  const std::size_t L = p.length;
  const std::size_t fs = disc.field_size();

  SliceSolution sol;
  sol.states.assign(L + 1, p.y_start);
  sol.v.assign(L + 1, p.v_start);
  sol.z.assign(L + 1, p.z_start);
  sol.r.assign(L + 1, p.r_start);

  std::vector<Field> next(L + 1, Field(fs));
  Field rhs(fs), react(fs);
  double previous = 0.0;
  for (int it = 1; it <= model.solver.max_iterations; ++it) {
    next[0] = p.y_start;
    for (std::size_t k = 0; k < L; ++k) {
      apply_reaction(disc, model.reaction, sol.states[k + 1], sol.z[k + 1], react);
      const Field& u = (*p.source)[p.start + k];
      for (std::size_t i = 0; i < fs; ++i) rhs[i] = next[k][i] + dt * (react[i] + u[i]);
      next[k + 1] = p.stepper->apply(rhs);
      guard_blowup(next[k + 1], p.start + k + 1);
    }
    double increment = 0.0;
    for (std::size_t k = 1; k <= L; ++k)
      increment = std::max(increment, max_abs_diff(next[k], sol.states[k]));
    std::swap(sol.states, next);
    for (std::size_t k = 1; k <= L; ++k) {
      sol.v[k] = evaluate_S(disc, model.s, sol.states[k]);
      sol.r[k] = stop_advance(sol.r[k - 1], sol.v[k], model.hysteresis);
      sol.z[k] = stop_output(sol.v[k], sol.r[k], model.hysteresis);
    }
    sol.log.iterations = it;
    sol.log.increments.push_back(increment);
    if (it > 1 && previous > 0.0) sol.log.ratios.push_back(increment / previous);
    previous = increment;
    if (increment <= model.solver.tolerance) return sol;
  }
  throw Error(ErrorCode::NonContraction,
              "Picard sweeps did not contract within " +
                  std::to_string(model.solver.max_iterations) +
                  " iterations on the slice starting at step " +
                  std::to_string(p.start) + "; try a shorter slice");
}

Trajectory solve_state(const Model& model, const SourceSeries& source) {
  if (!model.disc) throw Error(ErrorCode::InvalidConfig, "missing discretization", "domain");
  model.solver.validate();
  model.hysteresis.validate();
  check_source(model, source);
  const auto& disc = *model.disc;
  const auto& cfg = model.hysteresis;
  const std::size_t steps = static_cast<std::size_t>(model.solver.steps);
  const double dt = model.solver.dt();
  ImplicitStepper stepper(model.disc, dt);

  Trajectory traj;
  traj.times = model.solver.time_grid();
  traj.source = source;
  traj.states.assign(steps + 1, disc.zero_field());
  traj.s_values.assign(steps + 1, 0.0);
  std::vector<double> z(steps + 1, cfg.z0);
  traj.s_values[0] = evaluate_S(disc, model.s, traj.states[0]);
  traj.stop_state.assign(steps + 1, stop_initial_state(traj.s_values[0], cfg));

  if (model.solver.scheme == Scheme::ImexEuler) {
    const std::size_t fs = disc.field_size();
    Field rhs(fs), react(fs);
    for (std::size_t k = 0; k < steps; ++k) {
      apply_reaction(disc, model.reaction, traj.states[k], z[k], react);
      for (std::size_t i = 0; i < fs; ++i)
        rhs[i] = traj.states[k][i] + dt * (react[i] + source[k][i]);
      traj.states[k + 1] = stepper.apply(rhs);
      guard_blowup(traj.states[k + 1], k + 1);
      traj.s_values[k + 1] = evaluate_S(disc, model.s, traj.states[k + 1]);
      traj.stop_state[k + 1] = stop_advance(traj.stop_state[k], traj.s_values[k + 1], cfg);
      z[k + 1] = stop_output(traj.s_values[k + 1], traj.stop_state[k + 1], cfg);
    }
  } else {
    const std::size_t slice = static_cast<std::size_t>(model.solver.slice_steps);
    int index = 0;
    for (std::size_t start = 0; start < steps; start += slice, ++index) {
      SliceProblem p;
      p.model = &model;
      p.stepper = &stepper;
      p.source = &source;
      p.start = start;
      p.length = std::min(slice, steps - start);
      p.y_start = traj.states[start];
      p.z_start = z[start];
      p.v_start = traj.s_values[start];
      p.r_start = traj.stop_state[start];
      SliceSolution sol = picard_slice_iterate(p);
      for (std::size_t k = 1; k <= p.length; ++k) {
        traj.states[start + k] = std::move(sol.states[k]);
        traj.s_values[start + k] = sol.v[k];
        z[start + k] = sol.z[k];
        traj.stop_state[start + k] = sol.r[k];
      }
      sol.log.slice = index;
      traj.picard.push_back(std::move(sol.log));
    }
  }
  traj.hysteresis = Signal(traj.times, std::move(z));
  return traj;
}

double source_l2_norm(const SpatialDiscretization& disc, const SourceSeries& u,
                      double dt) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    const double n = disc.norm(u[k]);
    sum += dt * n * n;
  }
  return std::sqrt(sum);
}

BoundednessReport boundedness_report(const SpatialDiscretization& disc,
                                     const Trajectory& trajectory) {
  BoundednessReport r;
  for (const auto& y : trajectory.states)
    r.max_state_norm = std::max(r.max_state_norm, disc.norm(y));
  const double dt = trajectory.times.size() > 1
                        ? trajectory.times[1] - trajectory.times[0]
                        : 0.0;
  r.source_norm = source_l2_norm(disc, trajectory.source, dt);
  r.ratio = r.max_state_norm / (1.0 + r.source_norm);
  return r;
}

double max_state_deviation(const SpatialDiscretization& disc,
                           const std::vector<Field>& a,
                           const std::vector<Field>& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::GridMismatch, "trajectories have different lengths");
  double m = 0.0;
  Field diff;
  for (std::size_t k = 0; k < a.size(); ++k) {
    diff.resize(a[k].size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a[k][i] - b[k][i];
    m = std::max(m, disc.norm(diff));
  }
  return m;
}

}  // namespace hrd
