// SPDX-License-Identifier: Apache-2.0
#include "hrd/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <numbers>

#include "hrd/error.hpp"

namespace hrd {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, what, path);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(join(path, key), "is required");
  return *it;
}

const json* optional(const json& obj, const std::string& key) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

double number_or(const json& obj, const std::string& key, const std::string& path,
                 double fallback) {
  const json* j = optional(obj, key);
  return j ? number(*j, join(path, key)) : fallback;
}

long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

long integer_or(const json& obj, const std::string& key, const std::string& path,
                long fallback) {
  const json* j = optional(obj, key);
  return j ? integer(*j, join(path, key)) : fallback;
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], at(path, i)));
  return out;
}

/// Array of length m, or a scalar broadcast to all components.
std::vector<double> per_component(const json& j, const std::string& path, std::size_t m) {
  if (j.is_number()) return std::vector<double>(m, number(j, path));
  auto v = numbers(j, path);
  if (v.size() != m) fail(path, "expected " + std::to_string(m) + " entries");
  return v;
}

std::vector<double> per_component_or(const json& obj, const std::string& key,
                                     const std::string& path, std::size_t m,
                                     double fallback) {
  const json* j = optional(obj, key);
  return j ? per_component(*j, join(path, key), m) : std::vector<double>(m, fallback);
}

BoundaryKind boundary_kind(const json& j, const std::string& path) {
  const std::string s = text(j, path);
  if (s == "dirichlet") return BoundaryKind::Dirichlet;
  if (s == "neumann") return BoundaryKind::Neumann;
  fail(path, "expected 'dirichlet' or 'neumann'");
}

DomainSpec parse_domain(const json& root) {
  const json& d = require(root, "domain", "");
  DomainSpec dom;
  dom.dimension = static_cast<int>(integer(require(d, "dimension", "domain"), "domain.dimension"));
  if (dom.dimension != 1 && dom.dimension != 2) fail("domain.dimension", "must be 1 or 2");
  const auto extent = numbers(require(d, "extent", "domain"), "domain.extent");
  const json& res = require(d, "resolution", "domain");
  if (!res.is_array()) fail("domain.resolution", "expected an array of integers");
  if (extent.size() != static_cast<std::size_t>(dom.dimension))
    fail("domain.extent", "expected one entry per dimension");
  if (res.size() != static_cast<std::size_t>(dom.dimension))
    fail("domain.resolution", "expected one entry per dimension");
  for (int a = 0; a < dom.dimension; ++a) {
    dom.extent[a] = extent[a];
    dom.resolution[a] = static_cast<int>(integer(res[a], at("domain.resolution", a)));
  }
  dom.validate();
  return dom;
}

std::shared_ptr<const SpatialDiscretization> parse_discretization(const json& root) {
  const DomainSpec dom = parse_domain(root);
  const json& comps = require(root, "components", "");
  if (!comps.is_array() || comps.empty()) fail("components", "expected a nonempty array");
  std::vector<double> diffusion;
  BoundaryDecomposition bd;
  for (std::size_t j = 0; j < comps.size(); ++j) {
    const std::string path = at("components", j);
    const json& c = comps[j];
    diffusion.push_back(number(require(c, "diffusion", path), join(path, "diffusion")));
    std::map<Side, BoundaryKind> sides;
    BoundaryKind fallback = BoundaryKind::Dirichlet;
    if (const json* b = optional(c, "boundary")) {
      const std::string bpath = join(path, "boundary");
      if (!b->is_object()) fail(bpath, "expected an object of side labels");
      for (const auto& [key, value] : b->items()) {
        if (key == "default") {
          fallback = boundary_kind(value, join(bpath, key));
          continue;
        }
        auto side = side_from_string(key);
        if (!side || (dom.dimension == 1 && (*side == Side::Bottom || *side == Side::Top)))
          fail(join(bpath, key), "unknown side for this dimension");
        sides[*side] = boundary_kind(value, join(bpath, key));
      }
    }
    auto single = BoundaryDecomposition::from_sides(dom, {sides}, fallback);
    if (const json* ov = optional(c, "overrides")) {
      const std::string opath = join(path, "overrides");
      if (!ov->is_array()) fail(opath, "expected an array");
      for (std::size_t k = 0; k < ov->size(); ++k) {
        const std::string p = at(opath, k);
        const long node = integer(require((*ov)[k], "node", p), join(p, "node"));
        if (node < 0 || static_cast<std::size_t>(node) >= dom.node_count() ||
            !dom.on_boundary(static_cast<std::size_t>(node)))
          fail(join(p, "node"), "must index a boundary node");
        single.labels[0][node] = boundary_kind(require((*ov)[k], "kind", p), join(p, "kind"));
      }
    }
    bd.labels.push_back(std::move(single.labels[0]));
  }
  return std::make_shared<const SpatialDiscretization>(dom, std::move(bd), diffusion);
}

Field parse_mode(const json& j, const std::string& path, const SpatialDiscretization& disc) {
  const auto& dom = disc.domain();
  const std::size_t n = disc.node_count(), m = disc.components();
  Field f(disc.field_size(), 0.0);
  const std::string kind = text(require(j, "kind", path), join(path, "kind"));
  auto components = [&]() -> std::vector<std::size_t> {
    const json* c = optional(j, "component");
    if (!c) {
      std::vector<std::size_t> all(m);
      for (std::size_t k = 0; k < m; ++k) all[k] = k;
      return all;
    }
    const long idx = integer(*c, join(path, "component"));
    if (idx < 0 || static_cast<std::size_t>(idx) >= m)
      fail(join(path, "component"), "component index out of range");
    return {static_cast<std::size_t>(idx)};
  };
  if (kind == "field") {
    auto v = numbers(require(j, "values", path), join(path, "values"));
    if (v.size() != f.size())
      fail(join(path, "values"), "expected " + std::to_string(f.size()) + " entries");
    return v;
  }
  if (kind == "side") {
    const std::string side_name = text(require(j, "side", path), join(path, "side"));
    auto side = side_from_string(side_name);
    if (!side || (dom.dimension == 1 && (*side == Side::Bottom || *side == Side::Top)))
      fail(join(path, "side"), "unknown side for this dimension");
    const double value = number_or(j, "value", path, 1.0);
    bool any = false;
    for (std::size_t c : components())
      for (std::size_t node : side_nodes(dom, *side)) {
        const auto& label = disc.boundaries().labels[c][node];
        if (label && *label == BoundaryKind::Neumann) f[c * n + node] = value, any = true;
      }
    if (!any)
      throw Error(ErrorCode::EmptyBoundary, "side '" + side_name + "' has no Neumann nodes",
                  join(path, "side"));
    return f;
  }
  const double value = number_or(j, "value", path, 1.0);
  std::function<double(const std::array<double, 2>&)> shape;
  if (kind == "constant") {
    shape = [](const std::array<double, 2>&) { return 1.0; };
  } else if (kind == "sine" || kind == "cosine") {
    std::vector<double> k(2, 1.0);
    if (const json* w = optional(j, "wavenumber")) {
      if (w->is_number()) {
        k[0] = k[1] = number(*w, join(path, "wavenumber"));
      } else {
        k = numbers(*w, join(path, "wavenumber"));
        if (k.size() != static_cast<std::size_t>(dom.dimension))
          fail(join(path, "wavenumber"), "expected one entry per dimension");
        k.resize(2, 1.0);
      }
    }
    const bool sine = kind == "sine";
    shape = [=](const std::array<double, 2>& x) {
      double r = 1.0;
      for (int a = 0; a < dom.dimension; ++a) {
        const double arg = k[a] * std::numbers::pi * x[a] / dom.extent[a];
        r *= sine ? std::sin(arg) : std::cos(arg);
      }
      return r;
    };
  } else if (kind == "gaussian") {
    auto center = numbers(require(j, "center", path), join(path, "center"));
    if (center.size() != static_cast<std::size_t>(dom.dimension))
      fail(join(path, "center"), "expected one entry per dimension");
    center.resize(2, 0.0);
    const double width = number(require(j, "width", path), join(path, "width"));
    if (!(width > 0.0)) fail(join(path, "width"), "must be positive");
    shape = [=](const std::array<double, 2>& x) {
      const double dx = x[0] - center[0], dy = x[1] - center[1];
      return std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
    };
  } else {
    fail(join(path, "kind"), "unknown mode kind '" + kind + "'");
  }
  for (std::size_t c : components())
    for (std::size_t i = 0; i < n; ++i) f[c * n + i] = value * shape(dom.coordinates(i));
  return f;
}

ReactionFunction parse_reaction(const json& root, std::size_t m) {
  const std::string path = "reaction";
  const json* r = optional(root, "reaction");
  if (!r) return ReactionFunction::zero(m);
  ReactionFunction f;
  f.components = m;
  const std::string kind = text(require(*r, "kind", path), "reaction.kind");
  if (kind == "linear") f.kind = ReactionKind::Linear;
  else if (kind == "saturating") f.kind = ReactionKind::Saturating;
  else if (kind == "logistic-capped") f.kind = ReactionKind::LogisticCapped;
  else if (kind == "user-table") f.kind = ReactionKind::UserTable;
  else fail("reaction.kind", "unknown reaction kind '" + kind + "'");

  f.matrix.assign(m * m, 0.0);
  if (const json* mat = optional(*r, "matrix")) {
    if (mat->is_number()) {
      const double d = number(*mat, "reaction.matrix");
      for (std::size_t j = 0; j < m; ++j) f.matrix[j * m + j] = d;
    } else {
      if (!mat->is_array() || mat->size() != m) fail("reaction.matrix", "expected m rows");
      for (std::size_t j = 0; j < m; ++j) {
        auto row = numbers((*mat)[j], at("reaction.matrix", j));
        if (row.size() != m) fail(at("reaction.matrix", j), "expected m entries");
        for (std::size_t l = 0; l < m; ++l) f.matrix[j * m + l] = row[l];
      }
    }
  }
  f.hysteresis_coupling = per_component_or(*r, "hysteresis_coupling", path, m, 0.0);
  f.offset = per_component_or(*r, "offset", path, m, 0.0);

  double affine = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double row = std::abs(f.hysteresis_coupling[j]) + std::abs(f.offset[j]);
    for (std::size_t l = 0; l < m; ++l) row += std::abs(f.matrix[j * m + l]);
    affine = std::max(affine, row);
  }
  double growth = affine, lipschitz = affine;
  switch (f.kind) {
    case ReactionKind::Linear:
      break;
    case ReactionKind::Saturating:
      f.param1 = per_component(require(*r, "amplitude", path), "reaction.amplitude", m);
      f.param2 = per_component(require(*r, "steepness", path), "reaction.steepness", m);
      for (std::size_t j = 0; j < m; ++j) {
        growth = std::max(growth, affine + std::abs(f.param1[j]));
        lipschitz = std::max(lipschitz, affine + std::abs(f.param1[j] * f.param2[j]));
      }
      break;
    case ReactionKind::LogisticCapped:
      f.param1 = per_component(require(*r, "rate", path), "reaction.rate", m);
      f.param2 = per_component(require(*r, "cap", path), "reaction.cap", m);
      for (std::size_t j = 0; j < m; ++j) {
        growth = std::max(growth, affine + std::abs(f.param1[j]));
        lipschitz = std::max(lipschitz, affine + std::abs(f.param1[j]));
      }
      break;
    case ReactionKind::UserTable: {
      const json& tables = require(*r, "table", path);
      if (!tables.is_array() || tables.size() != m)
        fail("reaction.table", "expected one table per component");
      for (std::size_t j = 0; j < m; ++j) {
        const std::string tp = at("reaction.table", j);
        f.table_x.push_back(numbers(require(tables[j], "x", tp), join(tp, "x")));
        f.table_f.push_back(numbers(require(tables[j], "f", tp), join(tp, "f")));
        double fmax = 0.0, slope = 0.0;
        const auto& xs = f.table_x.back();
        const auto& fs = f.table_f.back();
        for (std::size_t k = 0; k < fs.size(); ++k) {
          fmax = std::max(fmax, std::abs(fs[k]));
          if (k > 0 && k < xs.size() && xs[k] > xs[k - 1])
            slope = std::max(slope, std::abs((fs[k] - fs[k - 1]) / (xs[k] - xs[k - 1])));
        }
        const double xmax = xs.empty() ? 0.0 : std::max(std::abs(xs.front()), std::abs(xs.back()));
        growth = std::max(growth, affine + fmax + slope * (1.0 + xmax));
        lipschitz = std::max(lipschitz, affine + slope);
      }
      break;
    }
  }
  f.growth_constant = number_or(*r, "growth_bound", path, std::max(growth, 1e-12));
  f.lipschitz = number_or(*r, "lipschitz", path, std::max(lipschitz, 1e-12));
  return f;
}

SolverConfig parse_solver(const json& root) {
  SolverConfig s;
  const json* j = optional(root, "solver");
  if (!j) return s;
  const std::string path = "solver";
  if (const json* scheme = optional(*j, "scheme")) {
    const std::string v = text(*scheme, "solver.scheme");
    if (v == "imex") s.scheme = Scheme::ImexEuler;
    else if (v == "picard") s.scheme = Scheme::PicardSliced;
    else fail("solver.scheme", "expected 'imex' or 'picard'");
  }
  s.final_time = number_or(*j, "final_time", path, s.final_time);
  s.steps = static_cast<int>(integer_or(*j, "steps", path, s.steps));
  s.slice_steps = static_cast<int>(integer_or(*j, "slice_steps", path, s.slice_steps));
  s.tolerance = number_or(*j, "tolerance", path, s.tolerance);
  s.max_iterations = static_cast<int>(integer_or(*j, "max_iterations", path, s.max_iterations));
  s.validate();
  return s;
}

std::vector<Field> parse_target(const json* j, const Model& model, const ControlBasis& basis) {
  const auto& disc = *model.disc;
  const auto times = model.solver.time_grid();
  if (!j) return std::vector<Field>(times.size(), disc.zero_field());
  const std::string path = "control.target";
  const std::string kind = text(require(*j, "kind", path), join(path, "kind"));
  if (kind == "zero") return std::vector<Field>(times.size(), disc.zero_field());
  if (kind == "state_of") {
    ControlSpec spec{basis, numbers(require(*j, "coefficients", path), join(path, "coefficients"))};
    if (spec.coefficients.size() != basis.size())
      fail(join(path, "coefficients"), "expected " + std::to_string(basis.size()) + " entries");
    return solve_state(model, apply_B(disc, spec, model.solver)).states;
  }
  if (kind == "separable") {
    const Field shape = parse_mode(require(*j, "spatial", path), join(path, "spatial"), disc);
    const double amplitude = number_or(*j, "amplitude", path, 1.0);
    std::string temporal = "constant";
    if (const json* t = optional(*j, "temporal")) temporal = text(*t, join(path, "temporal"));
    if (temporal != "constant" && temporal != "ramp" && temporal != "sine")
      fail(join(path, "temporal"), "expected 'constant', 'ramp' or 'sine'");
    std::vector<Field> out;
    for (double t : times) {
      const double s = temporal == "constant" ? 1.0
                       : temporal == "ramp"   ? t / model.solver.final_time
                                              : std::sin(std::numbers::pi * t / model.solver.final_time);
      Field f = shape;
      for (auto& v : f) v *= amplitude * s;
      out.push_back(std::move(f));
    }
    return out;
  }
  fail(join(path, "kind"), "unknown target kind '" + kind + "'");
}

ControlBlock parse_control(const json& c, const Model& model) {
  const std::string path = "control";
  const auto& disc = *model.disc;
  ControlBlock block;
  auto& basis = block.spec.basis;
  const std::string mode = text(require(c, "mode", path), "control.mode");
  if (mode == "distributed") basis.mode = ControlMode::Distributed;
  else if (mode == "boundary") basis.mode = ControlMode::Boundary;
  else fail("control.mode", "expected 'distributed' or 'boundary'");
  basis.time_hats = static_cast<int>(integer_or(c, "time_hats", path, 1));
  const json& modes = require(c, "spatial_modes", path);
  if (!modes.is_array() || modes.empty())
    fail("control.spatial_modes", "expected a nonempty array");
  for (std::size_t k = 0; k < modes.size(); ++k)
    basis.spatial_modes.push_back(parse_mode(modes[k], at("control.spatial_modes", k), disc));
  const std::size_t K = basis.size();
  if (const json* coeffs = optional(c, "coefficients")) {
    block.spec.coefficients = numbers(*coeffs, "control.coefficients");
  } else {
    block.spec.coefficients.assign(K, 0.0);
  }
  block.spec.validate(disc);
  if (const json* dir = optional(c, "direction")) {
    block.direction = numbers(*dir, "control.direction");
    if (block.direction.size() != K)
      fail("control.direction", "expected " + std::to_string(K) + " entries");
  } else {
    block.direction.assign(K, 1.0);
  }
  block.kappa = number_or(c, "kappa", path, block.kappa);
  if (!(block.kappa > 0.0)) fail("control.kappa", "must be positive");
  block.target = parse_target(optional(c, "target"), model, basis);
  if (const json* opt = optional(c, "optimizer")) {
    const std::string op = "control.optimizer";
    auto& o = block.optimizer;
    o.max_iterations = static_cast<int>(integer_or(*opt, "max_iterations", op, o.max_iterations));
    o.tolerance = number_or(*opt, "tolerance", op, o.tolerance);
    o.armijo_c = number_or(*opt, "armijo_c", op, o.armijo_c);
    o.initial_step = number_or(*opt, "initial_step", op, o.initial_step);
    if (o.max_iterations < 0) fail(join(op, "max_iterations"), "must be nonnegative");
    if (!(o.tolerance >= 0.0)) fail(join(op, "tolerance"), "must be nonnegative");
    if (!(o.armijo_c > 0.0 && o.armijo_c < 1.0)) fail(join(op, "armijo_c"), "must lie in (0,1)");
    if (!(o.initial_step > 0.0)) fail(join(op, "initial_step"), "must be positive");
  }
  return block;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("malformed JSON: ") + e.what(), "$");
  }
  if (!root.is_object()) fail("$", "expected a JSON object");

  Scenario sc;
  if (const json* seed = optional(root, "seed")) {
    if (!seed->is_number_unsigned() && !(seed->is_number_integer() && seed->get<long>() >= 0))
      fail("seed", "expected a nonnegative integer");
    sc.seed = seed->get<std::uint64_t>();
  }
  sc.alpha = number_or(root, "alpha", "", sc.alpha);
  sc.p = number_or(root, "p", "", sc.p);
  if (!(sc.alpha > 0.0 && sc.alpha < 1.0)) fail("alpha", "must lie in (0,1)");
  if (!(sc.p >= 2.0)) fail("p", "must be at least 2");

  auto& model = sc.model;
  model.disc = parse_discretization(root);
  const auto& disc = *model.disc;
  model.reaction = parse_reaction(root, disc.components());
  model.reaction.validate(sc.seed);
  if (const json* h = optional(root, "hysteresis")) {
    model.hysteresis.a = number(require(*h, "a", "hysteresis"), "hysteresis.a");
    model.hysteresis.b = number(require(*h, "b", "hysteresis"), "hysteresis.b");
    model.hysteresis.z0 = number_or(*h, "z0", "hysteresis", 0.0);
  }
  model.hysteresis.validate();
  if (const json* s = optional(root, "S")) {
    model.s.weight = parse_mode(require(*s, "weight", "S"), "S.weight", disc);
  } else {
    model.s.weight.assign(disc.field_size(), 1.0);
  }
  model.s.validate(disc);
  model.solver = parse_solver(root);
  model.validate();

  if (const json* c = optional(root, "control")) {
    if (!(sc.alpha < 0.5)) fail("alpha", "control problems require alpha in (0, 1/2)");
    sc.control = parse_control(*c, model);
  }
  if (const json* fd = optional(root, "fd")) {
    if (const json* l = optional(*fd, "lambdas")) {
      sc.lambdas = numbers(*l, "fd.lambdas");
      if (sc.lambdas.empty()) fail("fd.lambdas", "must not be empty");
      for (std::size_t i = 0; i < sc.lambdas.size(); ++i) {
        if (!(sc.lambdas[i] > 0.0)) fail(at("fd.lambdas", i), "must be positive");
        if (i > 0 && !(sc.lambdas[i] < sc.lambdas[i - 1]))
          fail(at("fd.lambdas", i), "must be strictly decreasing");
      }
    }
  }
  auto& diag = sc.diagnostic;
  double tmin = 1e-4, tmax = 10.0;
  long count = 200;
  if (const json* d = optional(root, "diagnostic")) {
    const std::string path = "diagnostic";
    if (const json* th = optional(*d, "thetas")) diag.thetas = numbers(*th, "diagnostic.thetas");
    for (std::size_t i = 0; i < diag.thetas.size(); ++i)
      if (!(diag.thetas[i] >= 0.0 && diag.thetas[i] < 1.0))
        fail(at("diagnostic.thetas", i), "must lie in [0,1)");
    diag.gamma = number_or(*d, "gamma", path, diag.gamma);
    if (!(diag.gamma > 0.0 && diag.gamma < 1.0)) fail("diagnostic.gamma", "must lie in (0,1)");
    if (const json* tg = optional(*d, "t_grid")) {
      tmin = number_or(*tg, "min", "diagnostic.t_grid", tmin);
      tmax = number_or(*tg, "max", "diagnostic.t_grid", tmax);
      count = integer_or(*tg, "count", "diagnostic.t_grid", count);
      if (!(tmin > 0.0 && tmax > tmin)) fail("diagnostic.t_grid", "requires 0 < min < max");
      if (count < 2) fail("diagnostic.t_grid.count", "must be at least 2");
    }
  }
  for (long i = 0; i < count; ++i)
    diag.t_grid.push_back(tmin * std::pow(tmax / tmin, static_cast<double>(i) / (count - 1)));
  return sc;
}

SourceSeries Scenario::source() const {
  if (!control) return zero_source(*model.disc, model.solver);
  return apply_B(*model.disc, control->spec, model.solver);
}

SourceSeries Scenario::direction_source() const {
  if (!control)
    throw Error(ErrorCode::InvalidConfig, "a control block is required", "control");
  ControlSpec dir{control->spec.basis, control->direction};
  return apply_B(*model.disc, dir, model.solver);
}

ControlProblem Scenario::control_problem() const {
  if (!control)
    throw Error(ErrorCode::InvalidConfig, "a control block is required", "control");
  ControlProblem p{model, control->target, control->kappa};
  p.validate();
  return p;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Table trajectory_table(const SpatialDiscretization& disc, const Trajectory& traj) {
  Table t{{"t", "z", "S_y", "norm_y"}, {}};
  for (std::size_t k = 0; k < traj.size(); ++k)
    t.add_row({traj.times[k], traj.hysteresis.value(k), traj.s_values[k],
               disc.norm(traj.states[k])});
  return t;
}

Table sensitivity_table(const SpatialDiscretization& disc, const SensitivityRecord& rec) {
  Table t{{"t", "S_zeta", "w", "norm_zeta"}, {}};
  for (std::size_t k = 0; k < rec.times.size(); ++k)
    t.add_row({rec.times[k], rec.s_values[k], rec.hysteresis[k], disc.norm(rec.zeta[k])});
  return t;
}

Table fd_table(const FdStudy& study) {
  Table t{{"lambda", "error"}, {}};
  for (const auto& row : study.rows) t.add_row({row.lambda, row.error});
  return t;
}

Table history_table(const OptimizationResult& result) {
  Table t{{"iter", "J", "grad_inf", "step"}, {}};
  for (const auto& h : result.history)
    t.add_row({static_cast<double>(h.iteration), h.cost, h.grad_inf, h.step});
  return t;
}

Table diagnostic_table(const Scenario& scenario) {
  Table t{{"theta", "component", "sup", "t_at_sup", "norm_at_sup", "min_eigenvalue",
           "max_eigenvalue"},
          {}};
  for (double theta : scenario.diagnostic.thetas) {
    const auto report = fractional_power_diagnostic(
        *scenario.model.disc, theta, scenario.diagnostic.t_grid, scenario.diagnostic.gamma);
    for (std::size_t j = 0; j < report.components.size(); ++j) {
      const auto& c = report.components[j];
      t.add_row({theta, static_cast<double>(j), c.sup, c.t_at_sup, c.norm_at_sup,
                 c.min_eigenvalue, c.max_eigenvalue});
    }
  }
  return t;
}

std::string trajectory_snapshot(const SpatialDiscretization& disc, const Trajectory& traj) {
  const auto& dom = disc.domain();
  const std::uint32_t header[5] = {
      static_cast<std::uint32_t>(dom.dimension),
      static_cast<std::uint32_t>(dom.resolution[0]),
      static_cast<std::uint32_t>(dom.dimension == 2 ? dom.resolution[1] : 1),
      static_cast<std::uint32_t>(disc.components()),
      static_cast<std::uint32_t>(traj.size())};
  std::string out(sizeof header, '\0');
  std::memcpy(out.data(), header, sizeof header);
  for (const auto& y : traj.states) {
    const std::size_t off = out.size();
    out.resize(off + y.size() * sizeof(double));
    std::memcpy(out.data() + off, y.data(), y.size() * sizeof(double));
  }
  return out;
}

}  // namespace hrd
