// SPDX-License-Identifier: Apache-2.0
//
// Test-only oracles and generators. Nothing here calls into the code paths
// it is used to check.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "hrd/control.hpp"
#include "hrd/evolution.hpp"
#include "hrd/hysteresis.hpp"
#include "hrd/spatial.hpp"

namespace hrd::testing {

/// Classic play recursion p_{k+1} = max(v_{k+1} - b, min(v_{k+1} - a, p_k)),
/// p_0 = v_0 - z0; returns the stop v - p.
inline std::vector<double> stop_via_play_formula(const std::vector<double>& v, double a,
                                                 double b, double z0) {
  std::vector<double> z(v.size());
  double p = v[0] - z0;
  z[0] = z0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    p = std::max(v[k] - b, std::min(v[k] - a, p));
    z[k] = v[k] - p;
  }
  return z;
}

/// Linear refinement by `factor` (inserting collinear points).
inline Signal refine(const Signal& s, int factor) {
  std::vector<double> t, v;
  for (std::size_t k = 0; k + 1 < s.size(); ++k)
    for (int r = 0; r < factor; ++r) {
      const double w = static_cast<double>(r) / factor;
      t.push_back(s.time(k) + w * (s.time(k + 1) - s.time(k)));
      v.push_back(s.value(k) + w * (s.value(k + 1) - s.value(k)));
    }
  t.push_back(s.time(s.size() - 1));
  v.push_back(s.value(s.size() - 1));
  return Signal(t, v);
}

/// Random walk on a dyadic lattice (multiples of 2^-10): every sum the stop
/// recursion forms is exact, so rate-independence checks can be bitwise.
inline Signal dyadic_signal(std::mt19937_64& rng, std::size_t n, int amplitude_steps = 2048) {
  std::uniform_int_distribution<int> step(-amplitude_steps / 4, amplitude_steps / 4);
  std::vector<double> t(n), v(n);
  int level = 0;
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = static_cast<double>(k);
    v[k] = std::ldexp(static_cast<double>(level), -10);
    level = std::clamp(level + step(rng), -amplitude_steps, amplitude_steps);
  }
  return Signal(t, v);
}

inline Signal random_signal(std::mt19937_64& rng, std::size_t n, double scale = 2.0) {
  std::normal_distribution<double> step(0.0, scale / 4.0);
  std::uniform_real_distribution<double> dt(0.1, 1.0);
  std::vector<double> t(n), v(n);
  double time = 0.0, value = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = time;
    v[k] = value;
    time += dt(rng);
    value += step(rng);
  }
  return Signal(t, v);
}

inline std::shared_ptr<const SpatialDiscretization> line(int nodes, BoundaryKind left,
                                                         BoundaryKind right,
                                                         double diffusion = 1.0,
                                                         double length = 1.0) {
  DomainSpec d;
  d.dimension = 1;
  d.extent = {length, 1.0};
  d.resolution = {nodes, 1};
  auto bd = BoundaryDecomposition::from_sides(d, {{{Side::Left, left}, {Side::Right, right}}});
  return std::make_shared<const SpatialDiscretization>(d, bd, std::vector<double>{diffusion});
}

/// exp(-A t) y via dense eigendecomposition of the symmetrized operator.
inline Field exact_semigroup(const SpatialDiscretization& disc, const Field& y, double t) {
  Field out(disc.field_size(), 0.0);
  const std::size_t n = disc.node_count();
  for (std::size_t j = 0; j < disc.components(); ++j) {
    const auto& op = disc.component(j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(op.symmetric_dense());
    Eigen::VectorXd x(op.size());
    for (std::size_t f = 0; f < op.size(); ++f)
      x[f] = std::sqrt(op.mass[f]) * y[j * n + op.free_nodes[f]];
    const Eigen::VectorXd decay = (-t * eig.eigenvalues().array()).exp();
    const Eigen::VectorXd r =
        eig.eigenvectors() * decay.asDiagonal() * eig.eigenvectors().transpose() * x;
    for (std::size_t f = 0; f < op.size(); ++f)
      out[j * n + op.free_nodes[f]] = r[f] / std::sqrt(op.mass[f]);
  }
  return out;
}

inline double max_abs(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline Field nodal(const SpatialDiscretization& disc, double (*fn)(double)) {
  Field f(disc.field_size());
  for (std::size_t j = 0; j < disc.components(); ++j)
    for (std::size_t i = 0; i < disc.node_count(); ++i)
      f[j * disc.node_count() + i] = fn(disc.domain().coordinates(i)[0]);
  return f;
}

/// Saturating scenario family used by the derivative checks: 1D, Dirichlet
/// left / Neumann right, f = -y + amp tanh(k y) + c z, narrow hysteresis band
/// so the stop switches several times, random distributed control.
struct SaturatingCase {
  Model model;
  SourceSeries u;
  SourceSeries h;
};

inline SaturatingCase saturating_case(std::mt19937_64& rng, int nodes = 21, int steps = 80) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  SaturatingCase c;
  auto disc = line(nodes, BoundaryKind::Dirichlet, BoundaryKind::Neumann, 0.2 + 0.3 * U(rng));
  c.model.disc = disc;
  c.model.s.weight = Field(disc->field_size(), 1.0);
  ReactionFunction f;
  f.kind = ReactionKind::Saturating;
  f.components = 1;
  f.matrix = {-1.0};
  f.hysteresis_coupling = {0.5 + U(rng)};
  f.offset = {0.0};
  f.param1 = {0.5 + U(rng)};
  f.param2 = {1.0 + 2.0 * U(rng)};
  f.growth_constant = 1.0 + f.hysteresis_coupling[0] + f.param1[0];
  f.lipschitz = 1.0 + f.hysteresis_coupling[0] + f.param1[0] * f.param2[0];
  c.model.reaction = f;
  const double half = 0.02 + 0.03 * U(rng);
  c.model.hysteresis = {-half, half, (2.0 * U(rng) - 1.0) * 0.5 * half};
  c.model.solver.scheme = Scheme::ImexEuler;
  c.model.solver.final_time = 2.0;
  c.model.solver.steps = steps;

  ControlBasis basis;
  basis.mode = ControlMode::Distributed;
  basis.time_hats = 4;
  const std::size_t n = disc->node_count();
  for (int k = 1; k <= 2; ++k) {
    Field mode(n);
    for (std::size_t i = 0; i < n; ++i)
      mode[i] = std::sin((k - 0.5) * M_PI * disc->domain().coordinates(i)[0]);
    basis.spatial_modes.push_back(mode);
  }
  std::normal_distribution<double> N(0.0, 1.0);
  ControlSpec u{basis, std::vector<double>(basis.size())};
  ControlSpec h{basis, std::vector<double>(basis.size())};
  for (auto& x : u.coefficients) x = 1.5 * N(rng);
  for (auto& x : h.coefficients) x = N(rng);
  c.u = apply_B(*disc, u, c.model.solver);
  c.h = apply_B(*disc, h, c.model.solver);
  return c;
}

/// Time hat j of `count` on a uniform partition of [0,T].
inline double hat(int j, int count, double t, double T) {
  if (count == 1) return 1.0;
  const double w = T / (count - 1);
  return std::max(0.0, 1.0 - std::abs(t - j * w) / w);
}

inline double quad_inner(const SpatialDiscretization& disc, const Field& a, const Field& b) {
  double s = 0.0;
  const auto q = disc.quadrature();
  for (std::size_t i = 0; i < a.size(); ++i) s += q[i % q.size()] * a[i] * b[i];
  return s;
}

/// Brute-force quadratic form of the reduced cost for an affine state map.
struct ResponseOracle {
  Eigen::MatrixXd M, N;
  Eigen::VectorXd b;
  double c = 0.0;

  ResponseOracle(const ControlProblem& p, const ControlBasis& basis) {
    const auto& disc = *p.model.disc;
    const std::size_t K = basis.size();
    const double dt = p.model.solver.dt(), T = p.model.solver.final_time;
    const auto times = p.model.solver.time_grid();
    const auto y0 = solve_state(p.model, zero_source(disc, p.model.solver));
    std::vector<std::vector<Field>> R(K);
    for (std::size_t i = 0; i < K; ++i) {
      ControlSpec e{basis, std::vector<double>(K, 0.0)};
      e.coefficients[i] = 1.0;
      const auto yi = solve_state(p.model, apply_B(disc, e, p.model.solver));
      R[i] = yi.states;
      for (std::size_t k = 0; k < R[i].size(); ++k)
        for (std::size_t n = 0; n < R[i][k].size(); ++n) R[i][k][n] -= y0.states[k][n];
    }
    M = Eigen::MatrixXd::Zero(K, K);
    N = Eigen::MatrixXd::Zero(K, K);
    b = Eigen::VectorXd::Zero(K);
    for (std::size_t k = 1; k < times.size(); ++k) {
      Field r = p.target[k];
      for (std::size_t n = 0; n < r.size(); ++n) r[n] -= y0.states[k][n];
      c += 0.5 * dt * quad_inner(disc, r, r);
      for (std::size_t i = 0; i < K; ++i) {
        b[i] += dt * quad_inner(disc, R[i][k], r);
        for (std::size_t j = 0; j < K; ++j) M(i, j) += dt * quad_inner(disc, R[i][k], R[j][k]);
      }
    }
    const int H = basis.time_hats;
    for (std::size_t k = 0; k + 1 < times.size(); ++k)
      for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j) {
          const double ti = hat(static_cast<int>(i) % H, H, times[k], T);
          const double tj = hat(static_cast<int>(j) % H, H, times[k], T);
          N(i, j) += dt * ti * tj *
                     quad_inner(disc, basis.spatial_modes[i / H], basis.spatial_modes[j / H]);
        }
  }

  double cost(const Eigen::VectorXd& u, double kappa) const {
    return 0.5 * u.dot((M + kappa * N) * u) - b.dot(u) + c;
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd& u, double kappa) const {
    return (M + kappa * N) * u - b;
  }
  Eigen::VectorXd optimum(double kappa) const { return (M + kappa * N).ldlt().solve(b); }
};

inline Eigen::VectorXd as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace hrd::testing
