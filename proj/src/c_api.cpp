// SPDX-License-Identifier: Apache-2.0
#include "hrd/hrd.h"

#include <json.hpp>

#include <exception>
#include <string>

#include "hrd/error.hpp"
#include "hrd/scenario.hpp"

struct hrd_scenario {
  hrd::Scenario scenario;
};

struct hrd_table {
  hrd::Table table;
};

struct hrd_trajectory {
  std::shared_ptr<const hrd::SpatialDiscretization> disc;
  hrd::Trajectory trajectory;
};

struct hrd_optimization {
  hrd::OptimizationResult result;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_field;

hrd_status status_for(hrd::ErrorCode code) {
  switch (code) {
    case hrd::ErrorCode::Io: return HRD_ERR_IO;
    default: break;
  }
  switch (hrd::exit_status(code)) {
    case 3: return HRD_ERR_NUMERIC;
    case 4: return HRD_ERR_NON_CONTRACTION;
    default: return HRD_ERR_VALIDATION;
  }
}

template <class F>
hrd_status guarded(F&& body) {
  last_error.clear();
  last_field.clear();
  try {
    body();
    return HRD_OK;
  } catch (const hrd::Error& e) {
    last_error = e.what();
    last_field = e.field();
    return status_for(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return HRD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return HRD_ERR_INTERNAL;
  }
}

hrd_status invalid(const char* what) {
  last_error = what;
  last_field.clear();
  return HRD_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* hrd_version(void) { return "0.1.0"; }
const char* hrd_last_error(void) { return last_error.c_str(); }
const char* hrd_last_error_field(void) { return last_field.c_str(); }

hrd_status hrd_scenario_from_json(const char* json_text, hrd_scenario** out) {
  if (!json_text || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] { *out = new hrd_scenario{hrd::parse_scenario(json_text)}; });
}

hrd_status hrd_scenario_set_seed(hrd_scenario* scenario, uint64_t seed) {
  if (!scenario) return invalid("null scenario");
  scenario->scenario.seed = seed;
  return HRD_OK;
}

uint64_t hrd_scenario_seed(const hrd_scenario* scenario) {
  return scenario ? scenario->scenario.seed : 0;
}

void hrd_scenario_free(hrd_scenario* scenario) { delete scenario; }

size_t hrd_table_rows(const hrd_table* table) { return table ? table->table.rows.size() : 0; }
size_t hrd_table_columns(const hrd_table* table) {
  return table ? table->table.columns.size() : 0;
}
const char* hrd_table_column_name(const hrd_table* table, size_t column) {
  if (!table || column >= table->table.columns.size()) return nullptr;
  return table->table.columns[column].c_str();
}
double hrd_table_value(const hrd_table* table, size_t row, size_t column) {
  if (!table || row >= table->table.rows.size() || column >= table->table.columns.size())
    return 0.0;
  return table->table.rows[row][column];
}
hrd_status hrd_table_write_csv(const hrd_table* table, const char* path) {
  if (!table || !path) return invalid("null argument");
  return guarded([&] { hrd::write_file_atomic(path, table->table.to_csv()); });
}
void hrd_table_free(hrd_table* table) { delete table; }

hrd_status hrd_stop_evaluate(const double* times, const double* values, size_t n, double a,
                             double b, double z0, double* stop, double* play) {
  if (!times || !values || !stop) return invalid("null argument");
  return guarded([&] {
    const hrd::Signal v({times, times + n}, {values, values + n});
    const auto out = hrd::stop_evaluate(v, {a, b, z0});
    for (size_t k = 0; k < n; ++k) {
      stop[k] = out.stop.value(k);
      if (play) play[k] = out.play.value(k);
    }
  });
}

hrd_status hrd_stop_directional_derivative(const double* times, const double* values,
                                           const double* direction, size_t n, double a,
                                           double b, double z0, double* derivative) {
  if (!times || !values || !direction || !derivative) return invalid("null argument");
  return guarded([&] {
    const std::vector<double> t(times, times + n);
    const hrd::Signal v(t, {values, values + n});
    const hrd::Signal h(t, {direction, direction + n});
    const auto out = hrd::stop_directional_derivative(v, h, {a, b, z0});
    for (size_t k = 0; k < n; ++k) derivative[k] = out.derivative[k];
  });
}

hrd_status hrd_hysteresis_eval_files(const char* config_json, const char* input_csv_path,
                                     hrd_table** out) {
  if (!config_json || !input_csv_path || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    nlohmann::json cfg_json;
    try {
      cfg_json = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw hrd::Error(hrd::ErrorCode::InvalidConfig, e.what(), "$");
    }
    if (cfg_json.is_object() && cfg_json.contains("hysteresis")) cfg_json = cfg_json["hysteresis"];
    hrd::HysteresisConfig cfg;
    auto get = [&](const char* key, double fallback, bool required) {
      if (!cfg_json.is_object() || !cfg_json.contains(key)) {
        if (required)
          throw hrd::Error(hrd::ErrorCode::InvalidConfig, "is required",
                           std::string("hysteresis.") + key);
        return fallback;
      }
      if (!cfg_json[key].is_number())
        throw hrd::Error(hrd::ErrorCode::InvalidConfig, "expected a number",
                         std::string("hysteresis.") + key);
      return cfg_json[key].get<double>();
    };
    cfg.a = get("a", 0.0, true);
    cfg.b = get("b", 0.0, true);
    cfg.z0 = get("z0", 0.0, false);
    cfg.validate();
    const hrd::Signal v = hrd::read_signal_csv(input_csv_path);
    const auto res = hrd::stop_evaluate(v, cfg);
    auto table = std::make_unique<hrd_table>();
    table->table.columns = {"t", "stop", "play"};
    for (size_t k = 0; k < v.size(); ++k)
      table->table.add_row({v.time(k), res.stop.value(k), res.play.value(k)});
    *out = table.release();
  });
}

hrd_status hrd_simulate(const hrd_scenario* scenario, hrd_trajectory** out) {
  if (!scenario || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    const auto& sc = scenario->scenario;
    auto traj = std::make_unique<hrd_trajectory>();
    traj->disc = sc.model.disc;
    traj->trajectory = hrd::solve_state(sc.model, sc.source());
    *out = traj.release();
  });
}

hrd_status hrd_trajectory_table(const hrd_trajectory* trajectory, hrd_table** out) {
  if (!trajectory || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new hrd_table{hrd::trajectory_table(*trajectory->disc, trajectory->trajectory)};
  });
}

hrd_status hrd_trajectory_write_snapshot(const hrd_trajectory* trajectory, const char* path) {
  if (!trajectory || !path) return invalid("null argument");
  return guarded([&] {
    hrd::write_file_atomic(path,
                           hrd::trajectory_snapshot(*trajectory->disc, trajectory->trajectory));
  });
}

void hrd_trajectory_free(hrd_trajectory* trajectory) { delete trajectory; }

hrd_status hrd_sensitivity(const hrd_scenario* scenario, hrd_table** out) {
  if (!scenario || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    const auto& sc = scenario->scenario;
    const hrd::Trajectory base = hrd::solve_state(sc.model, sc.source());
    const auto rec = hrd::solve_sensitivity(sc.model, {&base, sc.direction_source()});
    *out = new hrd_table{hrd::sensitivity_table(*sc.model.disc, rec)};
  });
}

hrd_status hrd_fd_check(const hrd_scenario* scenario, hrd_table** out) {
  if (!scenario || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    const auto& sc = scenario->scenario;
    const auto study =
        hrd::fd_convergence_study(sc.model, sc.source(), sc.direction_source(), sc.lambdas);
    *out = new hrd_table{hrd::fd_table(study)};
  });
}

hrd_status hrd_diagnose_semigroup(const hrd_scenario* scenario, hrd_table** out) {
  if (!scenario || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] { *out = new hrd_table{hrd::diagnostic_table(scenario->scenario)}; });
}

hrd_status hrd_optimize(const hrd_scenario* scenario, hrd_optimization** out) {
  if (!scenario || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    const auto& sc = scenario->scenario;
    const auto problem = sc.control_problem();
    *out = new hrd_optimization{hrd::optimize(problem, sc.control->spec, sc.control->optimizer)};
  });
}

hrd_status hrd_optimization_history(const hrd_optimization* result, hrd_table** out) {
  if (!result || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] { *out = new hrd_table{hrd::history_table(result->result)}; });
}

size_t hrd_optimization_coefficient_count(const hrd_optimization* result) {
  return result ? result->result.spec.coefficients.size() : 0;
}
double hrd_optimization_coefficient(const hrd_optimization* result, size_t index) {
  if (!result || index >= result->result.spec.coefficients.size()) return 0.0;
  return result->result.spec.coefficients[index];
}
int hrd_optimization_converged(const hrd_optimization* result) {
  return result && result->result.converged ? 1 : 0;
}
int hrd_optimization_stalled(const hrd_optimization* result) {
  return result && result->result.stalled ? 1 : 0;
}
const char* hrd_optimization_message(const hrd_optimization* result) {
  return result ? result->result.message.c_str() : "";
}
void hrd_optimization_free(hrd_optimization* result) { delete result; }

}  // extern "C"
