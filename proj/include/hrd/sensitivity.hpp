// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hrd/evolution.hpp"

namespace hrd {

/// Base trajectory plus a source direction h on the same grid.
struct LinearizedProblem {
  const Trajectory* base = nullptr;
  SourceSeries direction;
};

/// zeta = G'[u; h] together with the hysteresis derivative w = W'[S y; S zeta].
struct SensitivityRecord {
  std::vector<double> times;
  std::vector<Field> zeta;
  std::vector<double> s_values;    // S zeta_k
  std::vector<double> hysteresis;  // w_k
  std::vector<PicardLog> picard;
  bool approximate = false;        // reaction derivative from finite differences
};

/// Linearized recursion matching the scheme of `model.solver`. The Picard
/// variant caps its slices so that L (1 + 2 |S|) * slice_time < 1/2.
SensitivityRecord solve_sensitivity(const Model& model,
                                    const LinearizedProblem& problem);

struct FdRow {
  double lambda = 0.0;
  double error = 0.0;  // max_k |(G(u + lambda h + r)_k - G(u)_k) / lambda - zeta_k|_quad
};

struct FdStudy {
  std::vector<FdRow> rows;
  SensitivityRecord derivative;
  Trajectory base;

  bool strictly_decreasing() const;
};

/// Per-lambda source perturbation r(lambda) added on top of lambda * h.
using Remainder = std::function<SourceSeries(double lambda)>;

/// Difference-quotient error table for decreasing positive lambdas.
FdStudy fd_convergence_study(const Model& model, const SourceSeries& u,
                             const SourceSeries& h,
                             std::span<const double> lambdas);

/// Same table with G(u + lambda h + r(lambda)) in the quotient.
FdStudy hadamard_perturbed_quotient(const Model& model, const SourceSeries& u,
                                    const SourceSeries& h,
                                    const Remainder& remainder,
                                    std::span<const double> lambdas);

/// u + scale * h, sample-wise.
SourceSeries axpy(const SourceSeries& u, double scale, const SourceSeries& h);

}  // namespace hrd
