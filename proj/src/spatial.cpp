// SPDX-License-Identifier: Apache-2.0
#include "hrd/spatial.hpp"

#include <algorithm>
#include <cmath>

#include "hrd/error.hpp"

namespace hrd {

void DomainSpec::validate() const {
  if (dimension != 1 && dimension != 2)
    throw Error(ErrorCode::InvalidConfig, "dimension must be 1 or 2",
                "domain.dimension");
  for (int axis = 0; axis < dimension; ++axis) {
    const std::string idx = "[" + std::to_string(axis) + "]";
    if (!(extent[axis] > 0.0) || !std::isfinite(extent[axis]))
      throw Error(ErrorCode::InvalidConfig, "extent must be positive",
                  "domain.extent" + idx);
    if (resolution[axis] < 3)
      throw Error(ErrorCode::InvalidConfig, "need at least 3 nodes per axis",
                  "domain.resolution" + idx);
  }
}

std::size_t DomainSpec::node_count() const {
  return static_cast<std::size_t>(resolution[0]) *
         static_cast<std::size_t>(dimension == 2 ? resolution[1] : 1);
}

double DomainSpec::spacing(int axis) const {
  return extent[axis] / (resolution[axis] - 1);
}

std::array<double, 2> DomainSpec::coordinates(std::size_t node) const {
  const int ix = static_cast<int>(node % resolution[0]);
  const int iy = static_cast<int>(node / resolution[0]);
  return {ix * spacing(0), dimension == 2 ? iy * spacing(1) : 0.0};
}

bool DomainSpec::on_boundary(std::size_t node) const {
  const int ix = static_cast<int>(node % resolution[0]);
  const int iy = static_cast<int>(node / resolution[0]);
  if (ix == 0 || ix == resolution[0] - 1) return true;
  return dimension == 2 && (iy == 0 || iy == resolution[1] - 1);
}

std::optional<Side> side_from_string(const std::string& name) {
  if (name == "left") return Side::Left;
  if (name == "right") return Side::Right;
  if (name == "bottom") return Side::Bottom;
  if (name == "top") return Side::Top;
  return std::nullopt;
}

std::vector<std::size_t> side_nodes(const DomainSpec& domain, Side side) {
  std::vector<std::size_t> out;
  const int nx = domain.resolution[0];
  const int ny = domain.dimension == 2 ? domain.resolution[1] : 1;
  if (domain.dimension == 1 && (side == Side::Bottom || side == Side::Top))
    throw Error(ErrorCode::InvalidConfig, "1D domains only have left/right sides");
  switch (side) {
    case Side::Left:
      for (int iy = 0; iy < ny; ++iy) out.push_back(domain.index(0, iy));
      break;
    case Side::Right:
      for (int iy = 0; iy < ny; ++iy) out.push_back(domain.index(nx - 1, iy));
      break;
    case Side::Bottom:
      for (int ix = 0; ix < nx; ++ix) out.push_back(domain.index(ix, 0));
      break;
    case Side::Top:
      for (int ix = 0; ix < nx; ++ix) out.push_back(domain.index(ix, ny - 1));
      break;
  }
  return out;
}

BoundaryDecomposition BoundaryDecomposition::from_sides(
    const DomainSpec& domain,
    const std::vector<std::map<Side, BoundaryKind>>& per_component,
    BoundaryKind fallback) {
  BoundaryDecomposition out;
  const std::size_t n = domain.node_count();
  std::vector<Side> sides = {Side::Left, Side::Right};
  if (domain.dimension == 2) {
    sides.push_back(Side::Bottom);
    sides.push_back(Side::Top);
  }
  for (const auto& spec : per_component) {
    std::vector<std::optional<BoundaryKind>> labels(n);
    for (std::size_t i = 0; i < n; ++i)
      if (domain.on_boundary(i)) labels[i] = fallback;
    // Dirichlet wins at corners shared by a Dirichlet and a Neumann side.
    for (auto kind : {BoundaryKind::Neumann, BoundaryKind::Dirichlet}) {
      for (Side s : sides) {
        auto it = spec.find(s);
        const BoundaryKind k = it == spec.end() ? fallback : it->second;
        if (k != kind) continue;
        for (std::size_t node : side_nodes(domain, s)) labels[node] = k;
      }
    }
    out.labels.push_back(std::move(labels));
  }
  return out;
}

BoundaryDecomposition BoundaryDecomposition::uniform(const DomainSpec& domain,
                                                     std::size_t components,
                                                     BoundaryKind kind) {
  return from_sides(domain,
                    std::vector<std::map<Side, BoundaryKind>>(components), kind);
}

void BoundaryDecomposition::validate(const DomainSpec& domain) const {
  if (labels.empty())
    throw Error(ErrorCode::InvalidConfig, "at least one component required",
                "components");
  for (std::size_t j = 0; j < labels.size(); ++j) {
    const std::string path = "components[" + std::to_string(j) + "].boundary";
    if (labels[j].size() != domain.node_count())
      throw Error(ErrorCode::InvalidConfig, "label count does not match grid", path);
    for (std::size_t i = 0; i < labels[j].size(); ++i) {
      const bool boundary = domain.on_boundary(i);
      if (boundary && !labels[j][i])
        throw Error(ErrorCode::InvalidConfig,
                    "boundary node " + std::to_string(i) + " is unlabeled", path);
      if (!boundary && labels[j][i])
        throw Error(ErrorCode::InvalidConfig,
                    "interior node " + std::to_string(i) + " carries a label", path);
    }
  }
}

SparseMatrix ComponentOperator::stencil() const {
  SparseMatrix a = stiffness;
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      it.valueRef() /= mass[it.row()];
  return a;
}

Eigen::MatrixXd ComponentOperator::symmetric_dense() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd(stiffness);
  const Eigen::VectorXd s = mass.cwiseSqrt().cwiseInverse();
  return s.asDiagonal() * dense * s.asDiagonal();
}

namespace {

std::vector<double> trapezoid(int n, double h) {
  std::vector<double> w(n, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

std::vector<GridEdge> grid_edges(const DomainSpec& domain) {
  std::vector<GridEdge> edges;
  const int nx = domain.resolution[0];
  const double hx = domain.spacing(0);
  if (domain.dimension == 1) {
    for (int i = 0; i + 1 < nx; ++i)
      edges.push_back({domain.index(i), domain.index(i + 1), 1.0 / hx});
    return edges;
  }
  const int ny = domain.resolution[1];
  const double hy = domain.spacing(1);
  const auto wx = trapezoid(nx, hx);
  const auto wy = trapezoid(ny, hy);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix + 1 < nx; ++ix)
      edges.push_back({domain.index(ix, iy), domain.index(ix + 1, iy), wy[iy] / hx});
  for (int iy = 0; iy + 1 < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      edges.push_back({domain.index(ix, iy), domain.index(ix, iy + 1), wx[ix] / hy});
  return edges;
}

}  // namespace

SpatialDiscretization::SpatialDiscretization(DomainSpec domain,
                                             BoundaryDecomposition boundaries,
                                             std::vector<double> diffusion)
    : domain_(domain), boundaries_(std::move(boundaries)) {
  domain_.validate();
  boundaries_.validate(domain_);
  if (diffusion.size() != boundaries_.components())
    throw Error(ErrorCode::InvalidConfig,
                "one diffusion coefficient per component required",
                "components");
  for (std::size_t j = 0; j < diffusion.size(); ++j)
    if (!(diffusion[j] > 0.0) || !std::isfinite(diffusion[j]))
      throw Error(ErrorCode::InvalidConfig, "diffusion must be positive",
                  "components[" + std::to_string(j) + "].diffusion");

  const std::size_t n = domain_.node_count();
  const int nx = domain_.resolution[0];
  const auto wx = trapezoid(nx, domain_.spacing(0));
  quadrature_.assign(n, 0.0);
  boundary_quadrature_.assign(n, 0.0);
  if (domain_.dimension == 1) {
    for (int i = 0; i < nx; ++i) quadrature_[i] = wx[i];
    boundary_quadrature_.front() = 1.0;
    boundary_quadrature_.back() = 1.0;
  } else {
    const int ny = domain_.resolution[1];
    const auto wy = trapezoid(ny, domain_.spacing(1));
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        const std::size_t node = domain_.index(ix, iy);
        quadrature_[node] = wx[ix] * wy[iy];
        double bw = 0.0;
        if (iy == 0 || iy == ny - 1) bw += wx[ix];
        if (ix == 0 || ix == nx - 1) bw += wy[iy];
        boundary_quadrature_[node] = bw;
      }
  }

  edges_ = grid_edges(domain_);
  const auto& edges = edges_;
  for (std::size_t j = 0; j < boundaries_.components(); ++j) {
    ComponentOperator op;
    op.diffusion = diffusion[j];
    op.node_to_free.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& label = boundaries_.labels[j][i];
      if (label && *label == BoundaryKind::Dirichlet) continue;
      op.node_to_free[i] = static_cast<long>(op.free_nodes.size());
      op.free_nodes.push_back(i);
    }
    const std::size_t nf = op.free_nodes.size();
    op.mass.resize(static_cast<Eigen::Index>(nf));
    for (std::size_t f = 0; f < nf; ++f) op.mass[f] = quadrature_[op.free_nodes[f]];

    std::vector<Eigen::Triplet<double>> triplets;
    for (const GridEdge& e : edges) {
      const double w = diffusion[j] * e.weight;
      const long fa = op.node_to_free[e.a], fb = op.node_to_free[e.b];
      if (fa >= 0) triplets.emplace_back(fa, fa, w);
      if (fb >= 0) triplets.emplace_back(fb, fb, w);
      if (fa >= 0 && fb >= 0) {
        triplets.emplace_back(fa, fb, -w);
        triplets.emplace_back(fb, fa, -w);
      }
    }
    op.stiffness.resize(static_cast<Eigen::Index>(nf), static_cast<Eigen::Index>(nf));
    op.stiffness.setFromTriplets(triplets.begin(), triplets.end());
    op.stiffness.makeCompressed();
    ops_.push_back(std::move(op));
  }
}

SpatialDiscretization assemble(const DomainSpec& domain,
                               const BoundaryDecomposition& boundaries,
                               const std::vector<double>& diffusion) {
  return SpatialDiscretization(domain, boundaries, diffusion);
}

void SpatialDiscretization::check_shape(std::span<const double> y,
                                        const char* what) const {
  if (y.size() != field_size())
    throw Error(ErrorCode::ShapeMismatch,
                std::string(what) + " has " + std::to_string(y.size()) +
                    " entries, expected " + std::to_string(field_size()));
}

double SpatialDiscretization::inner(std::span<const double> x,
                                    std::span<const double> y) const {
  check_shape(x, "field");
  check_shape(y, "field");
  const std::size_t n = node_count();
  double sum = 0.0;
  for (std::size_t j = 0; j < components(); ++j)
    for (std::size_t i = 0; i < n; ++i)
      sum += quadrature_[i] * x[j * n + i] * y[j * n + i];
  return sum;
}

double SpatialDiscretization::norm(std::span<const double> x) const {
  return std::sqrt(inner(x, x));
}

double SpatialDiscretization::mass(std::span<const double> x) const {
  check_shape(x, "field");
  const std::size_t n = node_count();
  double sum = 0.0;
  for (std::size_t j = 0; j < components(); ++j)
    for (std::size_t i = 0; i < n; ++i) sum += quadrature_[i] * x[j * n + i];
  return sum;
}

Field SpatialDiscretization::apply_operator(std::span<const double> y) const {
  check_shape(y, "field");
  const std::size_t n = node_count();
  Field out(field_size(), 0.0);
  for (std::size_t j = 0; j < components(); ++j) {
    const auto& op = ops_[j];
    const double d = op.diffusion;
    for (const GridEdge& e : edges_) {
      const long fa = op.node_to_free[e.a], fb = op.node_to_free[e.b];
      const double ya = fa >= 0 ? y[j * n + e.a] : 0.0;
      const double yb = fb >= 0 ? y[j * n + e.b] : 0.0;
      const double flux = d * e.weight * (ya - yb);
      if (fa >= 0) out[j * n + e.a] += flux;
      if (fb >= 0) out[j * n + e.b] -= flux;
    }
    for (std::size_t f = 0; f < op.size(); ++f) out[j * n + op.free_nodes[f]] /= op.mass[f];
  }
  return out;
}

ImplicitStepper::ImplicitStepper(std::shared_ptr<const SpatialDiscretization> disc,
                                 double dt)
    : disc_(std::move(disc)), dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw Error(ErrorCode::InvalidConfig, "time step must be positive", "solver.dt");
  for (std::size_t j = 0; j < disc_->components(); ++j) {
    const auto& op = disc_->component(j);
    SparseMatrix system = dt * op.stiffness;
    for (std::size_t f = 0; f < op.size(); ++f)
      system.coeffRef(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(f)) += op.mass[f];
    system.makeCompressed();
    auto factor = std::make_unique<Eigen::SimplicialLDLT<SparseMatrix>>(system);
    if (factor->info() != Eigen::Success)
      throw Error(ErrorCode::NumericalFailure,
                  "factorization of M + dt K failed for component " +
                      std::to_string(j));
    systems_.push_back(std::move(system));
    factors_.push_back(std::move(factor));
  }
}

Field ImplicitStepper::apply(std::span<const double> y) const {
  const auto& disc = *disc_;
  disc.check_shape(y, "state");
  const std::size_t n = disc.node_count();
  Field out(disc.field_size(), 0.0);
  for (std::size_t j = 0; j < disc.components(); ++j) {
    const auto& op = disc.component(j);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(op.size()));
    for (std::size_t f = 0; f < op.size(); ++f)
      rhs[f] = op.mass[f] * y[j * n + op.free_nodes[f]];
    const double rhs_norm = rhs.norm();
    if (rhs_norm == 0.0) continue;
    const Eigen::VectorXd x = factors_[j]->solve(rhs);
    const double residual = (systems_[j] * x - rhs).norm() / rhs_norm;
    if (!(residual <= residual_tolerance))
      throw Error(ErrorCode::NumericalFailure,
                  "implicit solve residual " + std::to_string(residual) +
                      " exceeds tolerance for component " + std::to_string(j));
    for (std::size_t f = 0; f < op.size(); ++f) out[j * n + op.free_nodes[f]] = x[f];
  }
  return out;
}

Field apply_semigroup_step(const SpatialDiscretization& disc,
                           std::span<const double> y, double dt) {
  auto shared = std::make_shared<const SpatialDiscretization>(disc);
  return ImplicitStepper(shared, dt).apply(y);
}

double FractionalPowerReport::sup() const {
  double s = 0.0;
  for (const auto& c : components) s = std::max(s, c.sup);
  return s;
}

double fractional_semigroup_norm(std::span<const double> eigenvalues,
                                 double theta, double t) {
  double best = 0.0;
  for (double lambda : eigenvalues) {
    const double l = std::max(lambda, 0.0);
    best = std::max(best, std::pow(l + 1.0, theta) * std::exp(-l * t));
  }
  return best;
}

FractionalPowerReport fractional_power_diagnostic(
    const SpatialDiscretization& disc, double theta,
    std::span<const double> t_grid, double gamma) {
  if (!(theta >= 0.0 && theta < 1.0))
    throw Error(ErrorCode::InvalidConfig, "theta must lie in [0,1)", "diagnostic.theta");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw Error(ErrorCode::InvalidConfig, "gamma must lie in (0,1)", "diagnostic.gamma");
  for (double t : t_grid)
    if (!(t > 0.0))
      throw Error(ErrorCode::InvalidConfig, "time grid must be positive",
                  "diagnostic.t_grid");
  FractionalPowerReport report;
  report.theta = theta;
  report.gamma = gamma;
  for (std::size_t j = 0; j < disc.components(); ++j) {
    const auto& op = disc.component(j);
    if (op.size() > 500)
      throw Error(ErrorCode::Unsupported,
                  "dense eigendecomposition limited to 500 unknowns per component");
    const SparseMatrix kt = op.stiffness.transpose();
    if ((SparseMatrix(kt - op.stiffness)).norm() != 0.0)
      throw Error(ErrorCode::Unsupported, "component operator is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(op.symmetric_dense(),
                                                      Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
      throw Error(ErrorCode::NumericalFailure, "eigendecomposition failed");
    const Eigen::VectorXd& ev = eig.eigenvalues();
    std::vector<double> lambdas(ev.data(), ev.data() + ev.size());
    FractionalPowerReport::Component c;
    c.min_eigenvalue = ev.minCoeff();
    c.max_eigenvalue = ev.maxCoeff();
    for (double t : t_grid) {
      const double norm = fractional_semigroup_norm(lambdas, theta, t);
      const double weighted = norm * std::pow(t, theta) * std::exp(-(1.0 - gamma) * t);
      if (weighted > c.sup) {
        c.sup = weighted;
        c.t_at_sup = t;
        c.norm_at_sup = norm;
      }
    }
    report.components.push_back(c);
  }
  return report;
}

void SFunctional::validate(const SpatialDiscretization& disc) const {
  if (weight.size() != disc.field_size())
    throw Error(ErrorCode::InvalidConfig,
                "weight has " + std::to_string(weight.size()) +
                    " entries, expected " + std::to_string(disc.field_size()),
                "S.weight");
  bool nonzero = false;
  for (double w : weight) {
    if (!std::isfinite(w))
      throw Error(ErrorCode::InvalidConfig, "weight must be finite", "S.weight");
    nonzero = nonzero || w != 0.0;
  }
  if (!nonzero)
    throw Error(ErrorCode::InvalidConfig, "S must not vanish identically", "S.weight");
}

double SFunctional::norm(const SpatialDiscretization& disc) const {
  return disc.norm(weight);
}

double evaluate_S(const SpatialDiscretization& disc, const SFunctional& sfun,
                  std::span<const double> y) {
  disc.check_shape(y, "state");
  if (sfun.weight.size() != y.size())
    throw Error(ErrorCode::ShapeMismatch, "S weight does not match the state shape");
  return disc.inner(sfun.weight, y);
}

}  // namespace hrd
