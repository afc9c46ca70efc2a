// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Everything numeric goes through the C API in
// hrd/hrd.h; this file only handles arguments, files and the manifest.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hrd/hrd.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  bool snapshot = false;
  std::string input;
  std::string output;
};

class Failure {
 public:
  Failure(int code, std::string message) : code_(code), message_(std::move(message)) {}
  int code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  int code_;
  std::string message_;
};

int exit_code(hrd_status s) {
  switch (s) {
    case HRD_OK: return 0;
    case HRD_ERR_VALIDATION: return 2;
    case HRD_ERR_NUMERIC: return 3;
    case HRD_ERR_NON_CONTRACTION: return 4;
    case HRD_ERR_INVALID_ARGUMENT:
    case HRD_ERR_IO: return 2;
    default: return 1;
  }
}

void check(hrd_status s) {
  if (s != HRD_OK) throw Failure(exit_code(s), hrd_last_error());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure(2, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure(2, "cannot write '" + tmp.string() + "'");
    out << contents;
  }
  fs::rename(tmp, path);
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  ~Handle() { Free(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using Scenario = Handle<hrd_scenario, hrd_scenario_free>;
using Table = Handle<hrd_table, hrd_table_free>;
using Trajectory = Handle<hrd_trajectory, hrd_trajectory_free>;
using Optimization = Handle<hrd_optimization, hrd_optimization_free>;

class Run {
 public:
  Run(std::string name, const Options& opt) : name_(std::move(name)), opt_(opt) {
    config_text_ = read_file(opt.config);
    check(hrd_scenario_from_json(config_text_.c_str(), scenario_.out()));
    if (opt.seed) check(hrd_scenario_set_seed(scenario_.get(), *opt.seed));
    fs::create_directories(opt.out);
  }

  const hrd_scenario* scenario() const { return scenario_.get(); }

  void table(const hrd_table* t, const std::string& file) {
    check(hrd_table_write_csv(t, (fs::path(opt_.out) / file).string().c_str()));
    artifacts_.push_back(file);
  }

  void text(const std::string& contents, const std::string& file) {
    write_atomic(fs::path(opt_.out) / file, contents);
    artifacts_.push_back(file);
  }

  void artifact(const std::string& file) { artifacts_.push_back(file); }

  void note(const std::string& line) {
    if (!opt_.quiet) std::cerr << line << '\n';
  }

  void finish() {
    json manifest;
    manifest["subcommand"] = name_;
    manifest["config"] = opt_.config;
    manifest["config_hash"] = fnv1a(config_text_);
    manifest["seed"] = hrd_scenario_seed(scenario_.get());
    manifest["version"] = hrd_version();
    manifest["artifacts"] = artifacts_;
    write_atomic(fs::path(opt_.out) / "manifest.json", manifest.dump(2) + "\n");
    note(name_ + ": wrote " + std::to_string(artifacts_.size()) + " artifact(s) to " + opt_.out);
  }

 private:
  std::string name_;
  const Options& opt_;
  std::string config_text_;
  Scenario scenario_;
  std::vector<std::string> artifacts_;
};

void simulate(const Options& opt) {
  Run run("simulate", opt);
  Trajectory traj;
  check(hrd_simulate(run.scenario(), traj.out()));
  Table t;
  check(hrd_trajectory_table(traj.get(), t.out()));
  run.table(t.get(), "trajectory.csv");
  if (opt.snapshot) {
    const std::string file = "trajectory.bin";
    check(hrd_trajectory_write_snapshot(traj.get(), (fs::path(opt.out) / file).string().c_str()));
    run.artifact(file);
  }
  run.finish();
}

void sensitivity(const Options& opt) {
  Run run("sensitivity", opt);
  Table t;
  check(hrd_sensitivity(run.scenario(), t.out()));
  run.table(t.get(), "sensitivity.csv");
  run.finish();
}

void fd_check(const Options& opt) {
  Run run("fd-check", opt);
  Table t;
  check(hrd_fd_check(run.scenario(), t.out()));
  run.table(t.get(), "fd_check.csv");
  for (size_t r = 0; r < hrd_table_rows(t.get()); ++r) {
    char line[96];
    std::snprintf(line, sizeof line, "lambda=%-10.3g error=%.6e", hrd_table_value(t.get(), r, 0),
                  hrd_table_value(t.get(), r, 1));
    run.note(line);
  }
  run.finish();
}

void optimize(const Options& opt) {
  Run run("optimize", opt);
  Optimization res;
  check(hrd_optimize(run.scenario(), res.out()));
  Table hist;
  check(hrd_optimization_history(res.get(), hist.out()));
  run.table(hist.get(), "history.csv");
  json control;
  std::vector<double> coeffs;
  for (size_t i = 0; i < hrd_optimization_coefficient_count(res.get()); ++i)
    coeffs.push_back(hrd_optimization_coefficient(res.get(), i));
  control["coefficients"] = coeffs;
  control["converged"] = hrd_optimization_converged(res.get()) != 0;
  control["stalled"] = hrd_optimization_stalled(res.get()) != 0;
  control["message"] = hrd_optimization_message(res.get());
  run.text(control.dump(2, ' ', false, json::error_handler_t::strict) + "\n", "control.json");
  run.note(std::string("optimize: ") + hrd_optimization_message(res.get()));
  run.finish();
}

void diagnose(const Options& opt) {
  Run run("diagnose-semigroup", opt);
  Table t;
  check(hrd_diagnose_semigroup(run.scenario(), t.out()));
  run.table(t.get(), "semigroup.csv");
  run.finish();
}

void hysteresis_eval(const Options& opt) {
  const std::string cfg = read_file(opt.config);
  Table t;
  check(hrd_hysteresis_eval_files(cfg.c_str(), opt.input.c_str(), t.out()));
  check(hrd_table_write_csv(t.get(), opt.output.c_str()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reaction-diffusion systems with stop hysteresis: simulation, "
               "sensitivities and optimal control"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output directory");
    sub->add_option("--seed", opt.seed, "RNG seed (overrides the scenario)");
    sub->add_flag("--quiet", opt.quiet, "Suppress progress output");
  };

  auto* sim = app.add_subcommand("simulate", "State solve, writes trajectory.csv");
  add_common(sim);
  sim->add_flag("--snapshot", opt.snapshot, "Also write the per-node binary snapshot");
  auto* sens = app.add_subcommand("sensitivity", "Directional derivative along control.direction");
  add_common(sens);
  auto* fd = app.add_subcommand("fd-check", "Difference-quotient convergence table");
  add_common(fd);
  auto* optc = app.add_subcommand("optimize", "Descent on the reduced tracking cost");
  add_common(optc);
  auto* diag = app.add_subcommand("diagnose-semigroup", "Fractional-power semigroup bound report");
  add_common(diag);
  auto* hyst = app.add_subcommand("hysteresis-eval", "Evaluate stop and play on a signal CSV");
  hyst->add_option("--config", opt.config, "JSON with a, b, z0")->required()->check(CLI::ExistingFile);
  hyst->add_option("--input", opt.input, "Signal CSV with header t,v")->required()->check(CLI::ExistingFile);
  hyst->add_option("--output", opt.output, "Output CSV t,stop,play")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) simulate(opt);
    else if (sens->parsed()) sensitivity(opt);
    else if (fd->parsed()) fd_check(opt);
    else if (optc->parsed()) optimize(opt);
    else if (diag->parsed()) diagnose(opt);
    else if (hyst->parsed()) hysteresis_eval(opt);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message() << '\n';
    const char* field = hrd_last_error_field();
    if (field && *field) std::cerr << "field: " << field << '\n';
    return f.code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
