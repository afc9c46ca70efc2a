// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <array>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hrd {

/// m-component grid function, stored component-major:
/// value of component j at node i is field[j * node_count + i].
using Field = std::vector<double>;

/// Structured grid on [0,L] or [0,L1]x[0,L2]. Resolution counts nodes per
/// axis including the boundary nodes.
struct DomainSpec {
  int dimension = 1;
  std::array<double, 2> extent{1.0, 1.0};
  std::array<int, 2> resolution{3, 1};

  void validate() const;
  std::size_t node_count() const;
  double spacing(int axis) const;
  /// Flat node index; x-fastest.
  std::size_t index(int ix, int iy = 0) const {
    return static_cast<std::size_t>(iy) * resolution[0] + ix;
  }
  std::array<double, 2> coordinates(std::size_t node) const;
  bool on_boundary(std::size_t node) const;
};

enum class BoundaryKind { Dirichlet, Neumann };

/// Sides of the domain. 1D uses only Left and Right.
enum class Side { Left, Right, Bottom, Top };

std::optional<Side> side_from_string(const std::string& name);
/// Boundary nodes lying on a side (corners belong to two sides).
std::vector<std::size_t> side_nodes(const DomainSpec& domain, Side side);

/// Per-component labeling of boundary nodes. Interior nodes carry no label.
struct BoundaryDecomposition {
  std::vector<std::vector<std::optional<BoundaryKind>>> labels;

  std::size_t components() const { return labels.size(); }

  /// Uniform label per side; unspecified sides default to `fallback`.
  static BoundaryDecomposition from_sides(
      const DomainSpec& domain,
      const std::vector<std::map<Side, BoundaryKind>>& per_component,
      BoundaryKind fallback = BoundaryKind::Dirichlet);
  static BoundaryDecomposition uniform(const DomainSpec& domain,
                                       std::size_t components,
                                       BoundaryKind kind);

  /// Every boundary node labeled exactly once per component, no labels on
  /// interior nodes.
  void validate(const DomainSpec& domain) const;
};

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Grid edge with its flux weight (trapezoidal transverse measure over the
/// spacing), without the diffusion coefficient.
struct GridEdge {
  std::size_t a, b;
  double weight;
};

/// Discrete -d*Laplacian of one component, restricted to the non-Dirichlet
/// nodes. The operator is A = M^{-1} K with K symmetric positive
/// semidefinite and M the diagonal trapezoidal mass, so A is self-adjoint in
/// the quadrature inner product and reproduces the central-difference
/// stencil with ghost-node reflection at Neumann nodes.
struct ComponentOperator {
  std::vector<std::size_t> free_nodes;
  std::vector<long> node_to_free;  // -1 for Dirichlet nodes
  SparseMatrix stiffness;
  Eigen::VectorXd mass;
  double diffusion = 1.0;

  std::size_t size() const { return free_nodes.size(); }
  /// M^{-1} K, the finite-difference stencil matrix.
  SparseMatrix stencil() const;
  /// M^{-1/2} K M^{-1/2}: symmetric, same spectrum as the stencil.
  Eigen::MatrixXd symmetric_dense() const;
};

class SpatialDiscretization {
 public:
  SpatialDiscretization(DomainSpec domain, BoundaryDecomposition boundaries,
                        std::vector<double> diffusion);

  const DomainSpec& domain() const { return domain_; }
  const BoundaryDecomposition& boundaries() const { return boundaries_; }
  std::size_t components() const { return ops_.size(); }
  std::size_t node_count() const { return quadrature_.size(); }
  std::size_t field_size() const { return components() * node_count(); }
  const ComponentOperator& component(std::size_t j) const { return ops_[j]; }

  /// Trapezoidal node weights over the domain.
  std::span<const double> quadrature() const { return quadrature_; }
  /// Trapezoidal weights over the boundary (surface measure); zero inside.
  std::span<const double> boundary_quadrature() const { return boundary_quadrature_; }

  Field zero_field() const { return Field(field_size(), 0.0); }
  bool is_dirichlet(std::size_t component, std::size_t node) const {
    return ops_[component].node_to_free[node] < 0;
  }

  double inner(std::span<const double> x, std::span<const double> y) const;
  double norm(std::span<const double> x) const;
  /// Quadrature-weighted mass per component, summed.
  double mass(std::span<const double> x) const;

  /// Applies A to a field (Dirichlet nodes map to zero). Evaluated edge by
  /// edge from differences, so constants are annihilated exactly under
  /// pure Neumann conditions.
  Field apply_operator(std::span<const double> y) const;

  void check_shape(std::span<const double> y, const char* what) const;

 private:
  DomainSpec domain_;
  BoundaryDecomposition boundaries_;
  std::vector<ComponentOperator> ops_;
  std::vector<GridEdge> edges_;
  std::vector<double> quadrature_;
  std::vector<double> boundary_quadrature_;
};

SpatialDiscretization assemble(const DomainSpec& domain,
                               const BoundaryDecomposition& boundaries,
                               const std::vector<double>& diffusion);

/// Backward-Euler approximant (I + dt A)^{-1} with a cached factorization
/// of M + dt K per component.
class ImplicitStepper {
 public:
  ImplicitStepper(std::shared_ptr<const SpatialDiscretization> disc, double dt);

  double dt() const { return dt_; }
  const SpatialDiscretization& discretization() const { return *disc_; }

  /// Returns (I + dt A)^{-1} y. Throws NumericalFailure when the relative
  /// residual exceeds 1e-10.
  Field apply(std::span<const double> y) const;

  static constexpr double residual_tolerance = 1e-10;

 private:
  std::shared_ptr<const SpatialDiscretization> disc_;
  double dt_;
  std::vector<std::unique_ptr<Eigen::SimplicialLDLT<SparseMatrix>>> factors_;
  std::vector<SparseMatrix> systems_;
};

Field apply_semigroup_step(const SpatialDiscretization& disc,
                           std::span<const double> y, double dt);

struct FractionalPowerReport {
  struct Component {
    double sup = 0.0;          // sup over t of norm * t^theta * exp(-(1-gamma) t)
    double t_at_sup = 0.0;
    double norm_at_sup = 0.0;  // ||(A+1)^theta exp(-A t)|| at t_at_sup
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
  };
  double theta = 0.0;
  double gamma = 0.5;
  std::vector<Component> components;
  /// Largest sup over all components.
  double sup() const;
};

/// Operator norm of (A+1)^theta exp(-A t) in the quadrature inner product,
/// evaluated spectrally.
double fractional_semigroup_norm(std::span<const double> eigenvalues,
                                 double theta, double t);

/// Requires each component to have at most 500 free nodes.
FractionalPowerReport fractional_power_diagnostic(
    const SpatialDiscretization& disc, double theta,
    std::span<const double> t_grid, double gamma = 0.5);

/// Linear functional S y = sum_j sum_i quad_i w_ji y_ji.
struct SFunctional {
  Field weight;
  void validate(const SpatialDiscretization& disc) const;
  /// |w|_quad, the operator norm of S in the quadrature norm.
  double norm(const SpatialDiscretization& disc) const;
};

double evaluate_S(const SpatialDiscretization& disc, const SFunctional& sfun,
                  std::span<const double> y);

}  // namespace hrd
