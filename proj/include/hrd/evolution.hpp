// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hrd/hysteresis.hpp"
#include "hrd/reaction.hpp"
#include "hrd/spatial.hpp"

namespace hrd {

enum class Scheme {
  /// Implicit diffusion, explicit reaction and hysteresis.
  ImexEuler,
  /// Backward Euler in all terms; each slice solved by fixed-point sweeps of
  /// the discrete variation-of-constants formula.
  PicardSliced,
};

struct SolverConfig {
  Scheme scheme = Scheme::ImexEuler;
  double final_time = 1.0;
  int steps = 100;
  int slice_steps = 10;           // Picard slice length in time steps
  double tolerance = 1e-12;       // Picard max-norm increment tolerance
  int max_iterations = 200;

  double dt() const { return final_time / steps; }
  std::vector<double> time_grid() const;
  void validate() const;
};

/// Time-sampled source: one field per grid time, N+1 entries.
using SourceSeries = std::vector<Field>;

SourceSeries zero_source(const SpatialDiscretization& disc, const SolverConfig& solver);

/// Everything that fixes the discrete control-to-state map G.
struct Model {
  std::shared_ptr<const SpatialDiscretization> disc;
  SFunctional s;
  ReactionFunction reaction;
  HysteresisConfig hysteresis;
  SolverConfig solver;

  void validate() const;
};

struct PicardLog {
  int slice = 0;
  int iterations = 0;
  std::vector<double> increments;  // max-norm change per sweep
  std::vector<double> ratios;      // successive increment ratios
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> states;         // y_k, y_0 = 0
  std::vector<double> s_values;      // S y_k
  Signal hysteresis;                 // z_k = W[S y]_k
  std::vector<double> stop_state;    // S y_k - z_k, the stop's internal state
  SourceSeries source;               // u_k
  std::vector<PicardLog> picard;     // empty for IMEX

  std::size_t size() const { return times.size(); }
};

/// Any node magnitude above this aborts the solve with a blowup error.
inline constexpr double blowup_threshold = 1e12;

/// Discrete control-to-state map.
Trajectory solve_state(const Model& model, const SourceSeries& source);

/// Data for one Picard slice: time levels [start, start + length].
struct SliceProblem {
  const Model* model = nullptr;
  const ImplicitStepper* stepper = nullptr;
  const SourceSeries* source = nullptr;
  std::size_t start = 0;
  std::size_t length = 0;
  Field y_start;
  double z_start = 0.0;
  double v_start = 0.0;
  double r_start = 0.0;  // stop state v_start - z_start
};

struct SliceSolution {
  std::vector<Field> states;   // length + 1 levels, states[0] = y_start
  std::vector<double> z;       // length + 1
  std::vector<double> v;       // S y, length + 1
  std::vector<double> r;       // stop state, length + 1
  PicardLog log;
};

/// Fixed-point sweeps y -> Phi(y) on one slice until the max-norm increment
/// drops to the tolerance. Throws NonContraction after max_iterations.
SliceSolution picard_slice_iterate(const SliceProblem& problem);

struct BoundednessReport {
  double max_state_norm = 0.0;  // max_k |y_k|_quad
  double source_norm = 0.0;     // L2(0,T) norm of |u(t)|_quad
  double ratio = 0.0;           // max_state_norm / (1 + source_norm)
};

BoundednessReport boundedness_report(const SpatialDiscretization& disc,
                                     const Trajectory& trajectory);

/// sqrt(sum_{k<N} dt |u_k|^2_quad).
double source_l2_norm(const SpatialDiscretization& disc, const SourceSeries& u,
                      double dt);

/// max_k |a_k - b_k|_quad.
double max_state_deviation(const SpatialDiscretization& disc,
                           const std::vector<Field>& a,
                           const std::vector<Field>& b);

}  // namespace hrd
