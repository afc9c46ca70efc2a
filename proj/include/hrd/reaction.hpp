// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hrd/spatial.hpp"

namespace hrd {

enum class ReactionKind { Linear, Saturating, LogisticCapped, UserTable };

const char* to_string(ReactionKind kind);

/// Node-local reaction term f(y, z) for an m-component state y and the
/// scalar hysteresis output z. Every kind shares an affine part
///   sum_l coupling_matrix[j][l] y_l + hysteresis_coupling[j] z + offset[j]
/// to which a kind-specific scalar nonlinearity g_j(y_j) is added:
///   Linear          g = 0
///   Saturating      g = amplitude * tanh(steepness * y)
///   LogisticCapped  g = rate * y * (1 - min(|y|, cap) / cap)
///   UserTable       g = piecewise-linear interpolation of (x, f) samples,
///                   linearly extrapolated beyond the table
struct ReactionFunction {
  ReactionKind kind = ReactionKind::Linear;
  std::size_t components = 1;
  std::vector<double> matrix;               // m*m, row-major
  std::vector<double> hysteresis_coupling;  // m
  std::vector<double> offset;               // m
  // Saturating: amplitude, steepness. LogisticCapped: rate, cap.
  std::vector<double> param1;
  std::vector<double> param2;
  // UserTable: per-component sample abscissae and values.
  std::vector<std::vector<double>> table_x;
  std::vector<std::vector<double>> table_f;

  double growth_constant = 1.0;  // declared M in |f| <= M (1 + |y| + |z|)
  double lipschitz = 1.0;        // declared local Lipschitz modulus L

  static ReactionFunction zero(std::size_t m);
  static ReactionFunction linear(std::size_t m, std::vector<double> matrix,
                                 std::vector<double> coupling,
                                 std::vector<double> offset);

  void evaluate(std::span<const double> y, double z, std::span<double> out) const;

  /// Directional derivative f'[(y,z); (dy,dz)]. Right-directional at kinks.
  /// UserTable uses a central difference with step 1e-6 * scale.
  void derivative(std::span<const double> y, double z,
                  std::span<const double> dy, double dz,
                  std::span<double> out) const;

  bool derivative_is_approximate() const { return kind == ReactionKind::UserTable; }
  /// True when f is affine in (y, z).
  bool is_affine() const;

  /// Shape and finiteness checks plus the sampled growth check on a
  /// randomized probe set. Throws InvalidConfig naming "reaction.*".
  void validate(std::uint64_t seed = 0x5eed) const;
};

/// Evaluates f(y_i, z) at every node; Dirichlet entries are left at zero.
void apply_reaction(const SpatialDiscretization& disc, const ReactionFunction& f,
                    std::span<const double> y, double z, std::span<double> out);

/// Node-wise f'[(y_i, z); (dy_i, dz)].
void apply_reaction_derivative(const SpatialDiscretization& disc,
                               const ReactionFunction& f,
                               std::span<const double> y, double z,
                               std::span<const double> dy, double dz,
                               std::span<double> out);

}  // namespace hrd
