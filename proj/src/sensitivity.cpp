// SPDX-License-Identifier: Apache-2.0
#include "hrd/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hrd/error.hpp"

namespace hrd {

namespace {

void check_finite(std::span<const double> x, std::size_t step) {
  for (double v : x)
    if (!std::isfinite(v))
      throw Error(ErrorCode::NonsmoothPoint,
                  "reaction derivative undefined at step " + std::to_string(step));
}

std::size_t sensitivity_slice(const Model& model) {
  const double dt = model.solver.dt();
  const double modulus =
      model.reaction.lipschitz * (1.0 + 2.0 * model.s.norm(*model.disc));
  std::size_t cap = static_cast<std::size_t>(std::ceil(0.5 / (modulus * dt))) - 1;
  cap = std::max<std::size_t>(cap, 1);
  return std::min<std::size_t>(cap, static_cast<std::size_t>(model.solver.slice_steps));
}

}  // namespace

SensitivityRecord solve_sensitivity(const Model& model,
                                    const LinearizedProblem& problem) {
  if (!problem.base)
    throw Error(ErrorCode::InvalidConfig, "linearized problem needs a base trajectory");
  const Trajectory& base = *problem.base;
  const auto& disc = *model.disc;
  const std::size_t steps = static_cast<std::size_t>(model.solver.steps);
  if (base.size() != steps + 1 || base.stop_state.size() != steps + 1 ||
      problem.direction.size() != steps + 1)
    throw Error(ErrorCode::GridMismatch,
                "base trajectory and direction must share the solver grid");
  for (const auto& h : problem.direction) disc.check_shape(h, "direction");

  const double dt = model.solver.dt();
  const auto& cfg = model.hysteresis;
  const std::size_t fs = disc.field_size();
  ImplicitStepper stepper(model.disc, dt);
  const auto z = base.hysteresis.values();
  const auto& v = base.s_values;
  const auto& r = base.stop_state;

  SensitivityRecord rec;
  rec.times = base.times;
  rec.approximate = model.reaction.derivative_is_approximate();
  rec.zeta.assign(steps + 1, disc.zero_field());
  rec.s_values.assign(steps + 1, 0.0);
  rec.hysteresis.assign(steps + 1, 0.0);

  Field rhs(fs), react(fs);
  if (model.solver.scheme == Scheme::ImexEuler) {
    for (std::size_t k = 0; k < steps; ++k) {
      apply_reaction_derivative(disc, model.reaction, base.states[k], z[k],
                                rec.zeta[k], rec.hysteresis[k], react);
      check_finite(react, k);
      const Field& h = problem.direction[k];
      for (std::size_t i = 0; i < fs; ++i)
        rhs[i] = rec.zeta[k][i] + dt * (react[i] + h[i]);
      rec.zeta[k + 1] = stepper.apply(rhs);
      rec.s_values[k + 1] = evaluate_S(disc, model.s, rec.zeta[k + 1]);
      rec.hysteresis[k + 1] = stop_derivative_step(
          r[k], v[k + 1],
          rec.hysteresis[k] + (rec.s_values[k + 1] - rec.s_values[k]), cfg);
    }
    return rec;
  }

  // Picard variant: the fixed point g_j on each slice of the linearized
  // backward-Euler recursion.
  const std::size_t slice = sensitivity_slice(model);
  int index = 0;
  for (std::size_t start = 0; start < steps; start += slice, ++index) {
    const std::size_t L = std::min(slice, steps - start);
    PicardLog log;
    log.slice = index;
    std::vector<Field> cur(L + 1, rec.zeta[start]);
    std::vector<double> sz(L + 1, rec.s_values[start]);
    std::vector<double> w(L + 1, rec.hysteresis[start]);
    std::vector<Field> next(L + 1, Field(fs));
    double previous = 0.0;
    bool converged = false;
    for (int it = 1; it <= model.solver.max_iterations; ++it) {
      next[0] = cur[0];
      for (std::size_t k = 0; k < L; ++k) {
        const std::size_t g = start + k + 1;
        apply_reaction_derivative(disc, model.reaction, base.states[g], z[g],
                                  cur[k + 1], w[k + 1], react);
        check_finite(react, g);
        const Field& h = problem.direction[start + k];
        for (std::size_t i = 0; i < fs; ++i)
          rhs[i] = next[k][i] + dt * (react[i] + h[i]);
        next[k + 1] = stepper.apply(rhs);
      }
      double increment = 0.0;
      for (std::size_t k = 1; k <= L; ++k)
        for (std::size_t i = 0; i < fs; ++i)
          increment = std::max(increment, std::abs(next[k][i] - cur[k][i]));
      std::swap(cur, next);
      for (std::size_t k = 1; k <= L; ++k) {
        const std::size_t g = start + k;
        sz[k] = evaluate_S(disc, model.s, cur[k]);
        w[k] = stop_derivative_step(r[g - 1], v[g], w[k - 1] + (sz[k] - sz[k - 1]), cfg);
      }
      log.iterations = it;
      log.increments.push_back(increment);
      if (it > 1 && previous > 0.0) log.ratios.push_back(increment / previous);
      previous = increment;
      if (increment <= model.solver.tolerance) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw Error(ErrorCode::NonContraction,
                  "linearized Picard sweeps did not contract on the slice "
                  "starting at step " + std::to_string(start));
    for (std::size_t k = 1; k <= L; ++k) {
      rec.zeta[start + k] = std::move(cur[k]);
      rec.s_values[start + k] = sz[k];
      rec.hysteresis[start + k] = w[k];
    }
    rec.picard.push_back(std::move(log));
  }
  return rec;
}

SourceSeries axpy(const SourceSeries& u, double scale, const SourceSeries& h) {
  if (u.size() != h.size())
    throw Error(ErrorCode::GridMismatch, "sources have different time grids");
  SourceSeries out = u;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k].size() != h[k].size())
      throw Error(ErrorCode::ShapeMismatch, "sources have different shapes");
    for (std::size_t i = 0; i < u[k].size(); ++i) out[k][i] += scale * h[k][i];
  }
  return out;
}

bool FdStudy::strictly_decreasing() const {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].error < rows[i - 1].error)) return false;
  return true;
}

FdStudy hadamard_perturbed_quotient(const Model& model, const SourceSeries& u,
                                    const SourceSeries& h,
                                    const Remainder& remainder,
                                    std::span<const double> lambdas) {
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0))
      throw Error(ErrorCode::InvalidConfig, "lambdas must be positive", "fd.lambdas");
    if (i > 0 && !(lambdas[i] < lambdas[i - 1]))
      throw Error(ErrorCode::InvalidConfig, "lambdas must be decreasing", "fd.lambdas");
  }
  const auto& disc = *model.disc;
  FdStudy study;
  study.base = solve_state(model, u);
  study.derivative = solve_sensitivity(model, {&study.base, h});
  Field q(disc.field_size());
  for (double lambda : lambdas) {
    SourceSeries perturbed = axpy(u, lambda, h);
    if (remainder) perturbed = axpy(perturbed, 1.0, remainder(lambda));
    const Trajectory moved = solve_state(model, perturbed);
    double err = 0.0;
    for (std::size_t k = 0; k < moved.size(); ++k) {
      for (std::size_t i = 0; i < q.size(); ++i)
        q[i] = (moved.states[k][i] - study.base.states[k][i]) / lambda -
               study.derivative.zeta[k][i];
      err = std::max(err, disc.norm(q));
    }
    study.rows.push_back({lambda, err});
  }
  return study;
}

FdStudy fd_convergence_study(const Model& model, const SourceSeries& u,
                             const SourceSeries& h,
                             std::span<const double> lambdas) {
  return hadamard_perturbed_quotient(model, u, h, Remainder{}, lambdas);
}

}  // namespace hrd
