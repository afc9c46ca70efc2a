// SPDX-License-Identifier: Apache-2.0
#include "hrd/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hrd/error.hpp"

namespace hrd {

const char* to_string(ReactionKind kind) {
  switch (kind) {
    case ReactionKind::Linear: return "linear";
    case ReactionKind::Saturating: return "saturating";
    case ReactionKind::LogisticCapped: return "logistic-capped";
    case ReactionKind::UserTable: return "user-table";
  }
  return "unknown";
}

ReactionFunction ReactionFunction::zero(std::size_t m) {
  return linear(m, std::vector<double>(m * m, 0.0), std::vector<double>(m, 0.0),
                std::vector<double>(m, 0.0));
}

ReactionFunction ReactionFunction::linear(std::size_t m, std::vector<double> matrix,
                                          std::vector<double> coupling,
                                          std::vector<double> offset) {
  ReactionFunction f;
  f.kind = ReactionKind::Linear;
  f.components = m;
  f.matrix = std::move(matrix);
  f.hysteresis_coupling = std::move(coupling);
  f.offset = std::move(offset);
  double norm = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double row = std::abs(f.hysteresis_coupling[j]) + std::abs(f.offset[j]);
    for (std::size_t l = 0; l < m; ++l) row += std::abs(f.matrix[j * m + l]);
    norm = std::max(norm, row);
  }
  f.growth_constant = std::max(norm, 1e-12);
  f.lipschitz = std::max(norm, 1e-12);
  return f;
}

namespace {

double table_value(const std::vector<double>& xs, const std::vector<double>& fs,
                   double x) {
  const std::size_t n = xs.size();
  if (n == 1) return fs[0];
  std::size_t k;
  if (x <= xs.front()) {
    k = 0;
  } else if (x >= xs.back()) {
    k = n - 2;
  } else {
    k = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
  }
  const double s = (fs[k + 1] - fs[k]) / (xs[k + 1] - xs[k]);
  return fs[k] + s * (x - xs[k]);
}

}  // namespace

void ReactionFunction::evaluate(std::span<const double> y, double z,
                                std::span<double> out) const {
  const std::size_t m = components;
  for (std::size_t j = 0; j < m; ++j) {
    double v = hysteresis_coupling[j] * z + offset[j];
    for (std::size_t l = 0; l < m; ++l) v += matrix[j * m + l] * y[l];
    const double yj = y[j];
    switch (kind) {
      case ReactionKind::Linear:
        break;
      case ReactionKind::Saturating:
        v += param1[j] * std::tanh(param2[j] * yj);
        break;
      case ReactionKind::LogisticCapped:
        v += param1[j] * yj * (1.0 - std::min(std::abs(yj), param2[j]) / param2[j]);
        break;
      case ReactionKind::UserTable:
        v += table_value(table_x[j], table_f[j], yj);
        break;
    }
    out[j] = v;
  }
}

void ReactionFunction::derivative(std::span<const double> y, double z,
                                  std::span<const double> dy, double dz,
                                  std::span<double> out) const {
  const std::size_t m = components;
  if (kind == ReactionKind::UserTable) {
    double scale = std::max(1.0, std::abs(z));
    double dir = std::abs(dz);
    for (std::size_t l = 0; l < m; ++l) {
      scale = std::max(scale, std::abs(y[l]));
      dir = std::max(dir, std::abs(dy[l]));
    }
    if (dir == 0.0) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    const double eps = 1e-6 * scale / dir;
    std::vector<double> yp(m), ym(m), fp(m), fm(m);
    for (std::size_t l = 0; l < m; ++l) {
      yp[l] = y[l] + eps * dy[l];
      ym[l] = y[l] - eps * dy[l];
    }
    evaluate(yp, z + eps * dz, fp);
    evaluate(ym, z - eps * dz, fm);
    for (std::size_t j = 0; j < m; ++j) out[j] = (fp[j] - fm[j]) / (2.0 * eps);
    return;
  }
  for (std::size_t j = 0; j < m; ++j) {
    double v = hysteresis_coupling[j] * dz;
    for (std::size_t l = 0; l < m; ++l) v += matrix[j * m + l] * dy[l];
    const double yj = y[j], dj = dy[j];
    switch (kind) {
      case ReactionKind::Linear:
      case ReactionKind::UserTable:
        break;
      case ReactionKind::Saturating: {
        const double th = std::tanh(param2[j] * yj);
        v += param1[j] * param2[j] * (1.0 - th * th) * dj;
        break;
      }
      case ReactionKind::LogisticCapped: {
        // g(y) = r (y - y|y|/cap) inside the cap, 0 outside.
        const double r = param1[j], cap = param2[j], ay = std::abs(yj);
        const double inside = r * (1.0 - 2.0 * ay / cap) * dj;
        if (ay < cap) {
          v += inside;
        } else if (ay == cap) {
          // moving outward keeps g at zero
          const double outward = (yj > 0.0 ? dj : -dj);
          if (outward < 0.0) v += inside;
        }
        break;
      }
    }
    out[j] = v;
  }
}

bool ReactionFunction::is_affine() const {
  switch (kind) {
    case ReactionKind::Linear:
      return true;
    case ReactionKind::Saturating:
      return std::all_of(param1.begin(), param1.end(), [](double a) { return a == 0.0; });
    case ReactionKind::LogisticCapped:
      return std::all_of(param1.begin(), param1.end(), [](double a) { return a == 0.0; });
    case ReactionKind::UserTable:
      return false;
  }
  return false;
}

void ReactionFunction::validate(std::uint64_t seed) const {
  const std::size_t m = components;
  auto require = [](bool ok, const std::string& what, const std::string& field) {
    if (!ok) throw Error(ErrorCode::InvalidConfig, what, "reaction." + field);
  };
  auto finite_all = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  require(m >= 1, "at least one component", "components");
  require(matrix.size() == m * m, "matrix must be m x m", "matrix");
  require(hysteresis_coupling.size() == m, "one entry per component", "hysteresis_coupling");
  require(offset.size() == m, "one entry per component", "offset");
  require(finite_all(matrix) && finite_all(hysteresis_coupling) && finite_all(offset),
          "entries must be finite", "matrix");
  switch (kind) {
    case ReactionKind::Linear:
      break;
    case ReactionKind::Saturating:
      require(param1.size() == m && finite_all(param1), "one finite entry per component", "amplitude");
      require(param2.size() == m && finite_all(param2), "one finite entry per component", "steepness");
      break;
    case ReactionKind::LogisticCapped:
      require(param1.size() == m && finite_all(param1), "one finite entry per component", "rate");
      require(param2.size() == m, "one entry per component", "cap");
      for (double c : param2) require(c > 0.0 && std::isfinite(c), "cap must be positive", "cap");
      break;
    case ReactionKind::UserTable:
      require(table_x.size() == m && table_f.size() == m, "one table per component", "table");
      for (std::size_t j = 0; j < m; ++j) {
        const std::string field = "table[" + std::to_string(j) + "]";
        require(!table_x[j].empty() && table_x[j].size() == table_f[j].size(),
                "x and f must be nonempty and of equal length", field);
        require(finite_all(table_x[j]) && finite_all(table_f[j]), "entries must be finite", field);
        for (std::size_t k = 1; k < table_x[j].size(); ++k)
          require(table_x[j][k] > table_x[j][k - 1], "x must be strictly increasing", field);
      }
      break;
  }
  require(growth_constant > 0.0 && std::isfinite(growth_constant), "must be positive",
          "growth_bound");
  require(lipschitz > 0.0 && std::isfinite(lipschitz), "must be positive", "lipschitz");

  // Sampled growth check |f(y,z)|_inf <= M (1 + |y|_inf + |z|).
  std::mt19937_64 rng(seed);
  std::vector<double> y(m), out(m);
  for (double radius : {1.0, 10.0, 100.0, 1000.0}) {
    std::uniform_real_distribution<double> dist(-radius, radius);
    for (int probe = 0; probe < 64; ++probe) {
      double ynorm = 0.0;
      for (auto& v : y) {
        v = dist(rng);
        ynorm = std::max(ynorm, std::abs(v));
      }
      const double z = dist(rng);
      evaluate(y, z, out);
      double fnorm = 0.0;
      for (double v : out) {
        require(std::isfinite(v), "evaluation produced a non-finite value", "kind");
        fnorm = std::max(fnorm, std::abs(v));
      }
      require(fnorm <= growth_constant * (1.0 + ynorm + std::abs(z)) * (1.0 + 1e-12),
              "declared growth constant violated on probe set", "growth_bound");
    }
  }
}

void apply_reaction(const SpatialDiscretization& disc, const ReactionFunction& f,
                    std::span<const double> y, double z, std::span<double> out) {
  const std::size_t n = disc.node_count(), m = disc.components();
  std::vector<double> local(m), result(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) local[j] = y[j * n + i];
    f.evaluate(local, z, result);
    for (std::size_t j = 0; j < m; ++j)
      out[j * n + i] = disc.is_dirichlet(j, i) ? 0.0 : result[j];
  }
}

void apply_reaction_derivative(const SpatialDiscretization& disc,
                               const ReactionFunction& f,
                               std::span<const double> y, double z,
                               std::span<const double> dy, double dz,
                               std::span<double> out) {
  const std::size_t n = disc.node_count(), m = disc.components();
  std::vector<double> local(m), dlocal(m), result(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      local[j] = y[j * n + i];
      dlocal[j] = dy[j * n + i];
    }
    f.derivative(local, z, dlocal, dz, result);
    for (std::size_t j = 0; j < m; ++j)
      out[j * n + i] = disc.is_dirichlet(j, i) ? 0.0 : result[j];
  }
}

}  // namespace hrd
