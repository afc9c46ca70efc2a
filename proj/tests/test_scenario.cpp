// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstring>
#include <filesystem>

#include "hrd/error.hpp"
#include "hrd/scenario.hpp"
#include "hrd/signal_io.hpp"

using namespace hrd;
using nlohmann::json;

namespace {

std::string bundled(const std::string& name) {
  return read_text_file(std::string(HRD_SCENARIO_DIR) + "/" + name + ".json");
}

std::string field_of(const json& j) {
  try {
    parse_scenario(j.dump());
  } catch (const Error& e) {
    return e.field();
  }
  return "<none>";
}

json zero_json() { return json::parse(bundled("zero")); }

}  // namespace

TEST_CASE("bundled scenarios load") {
  for (const char* name : {"zero", "linear_quadratic", "saturating", "neumann_conservation"}) {
    CAPTURE(name);
    const auto sc = parse_scenario(bundled(name));
    CHECK(sc.model.disc);
  }
  const auto sat = parse_scenario(bundled("saturating"));
  REQUIRE(sat.control);
  CHECK(sat.control->spec.coefficients.size() == 8);
  CHECK(sat.lambdas.size() == 5);
  CHECK(sat.seed == 7);
  CHECK(sat.diagnostic.t_grid.size() == 200);
  CHECK(sat.diagnostic.t_grid.front() == doctest::Approx(1e-4));
  CHECK(sat.diagnostic.t_grid.back() == doctest::Approx(10.0));

  const auto cons = parse_scenario(bundled("neumann_conservation"));
  CHECK(cons.model.disc->domain().dimension == 2);
  for (std::size_t i = 0; i < cons.model.disc->node_count(); ++i) CHECK(!cons.model.disc->is_dirichlet(0, i));
}

TEST_CASE("validation names the offending field") {
  auto j = zero_json();
  j["hysteresis"]["a"] = 1.0;
  j["hysteresis"]["b"] = 0.5;
  CHECK(field_of(j) == "hysteresis.a");

  j = zero_json();
  j["hysteresis"]["z0"] = 3.0;
  CHECK(field_of(j) == "hysteresis.z0");

  j = zero_json();
  j["domain"]["resolution"] = {2};
  CHECK(field_of(j).rfind("domain.resolution", 0) == 0);

  j = zero_json();
  j["domain"]["extent"] = {-1.0};
  CHECK(field_of(j).rfind("domain.extent", 0) == 0);

  j = zero_json();
  j["components"][0]["diffusion"] = 0.0;
  CHECK(field_of(j) == "components[0].diffusion");

  j = zero_json();
  j["components"][0]["boundary"]["right"] = "robin";
  CHECK(field_of(j).rfind("components[0].boundary", 0) == 0);

  j = zero_json();
  j["S"]["weight"] = {{"kind", "constant"}, {"value", 0.0}};
  CHECK(field_of(j).rfind("S", 0) == 0);

  j = zero_json();
  j["solver"]["steps"] = 0;
  CHECK(field_of(j) == "solver.steps");

  j = zero_json();
  j["solver"]["scheme"] = "rk4";
  CHECK(field_of(j) == "solver.scheme");

  j = zero_json();
  j["reaction"] = {{"kind", "saturating"}, {"matrix", -1.0}, {"amplitude", 1.0}, {"steepness", 1.0},
                   {"growth_bound", 1e-3}};
  CHECK(field_of(j).rfind("reaction", 0) == 0);

  j = zero_json();
  j["reaction"]["kind"] = "cubic";
  CHECK(field_of(j) == "reaction.kind");

  j = json::parse(bundled("saturating"));
  j["control"]["coefficients"] = {1.0, 2.0};
  CHECK(field_of(j).rfind("control", 0) == 0);

  j = json::parse(bundled("saturating"));
  j["control"]["kappa"] = -1.0;
  CHECK(field_of(j) == "control.kappa");

  j = json::parse(bundled("saturating"));
  j["alpha"] = 0.7;
  CHECK(field_of(j) == "alpha");

  j = json::parse(bundled("saturating"));
  j["fd"]["lambdas"] = {1e-2, 1e-1};
  CHECK(field_of(j) == "fd.lambdas[1]");

  j = json::parse(bundled("saturating"));
  j["control"]["mode"] = "boundary";
  j["control"]["spatial_modes"] = {{{"kind", "side"}, {"side", "left"}}};
  j["control"]["coefficients"] = {0.0, 0.0, 0.0, 0.0};
  j["control"].erase("direction");
  // the left end is Dirichlet: nothing for a boundary control to act on
  try {
    parse_scenario(j.dump());
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyBoundary);
  }

  j = zero_json();
  j["p"] = 1.0;
  CHECK(field_of(j) == "p");

  CHECK_THROWS_AS(parse_scenario("{not json"), Error);
  try {
    parse_scenario("[1,2]");
  } catch (const Error& e) {
    CHECK(exit_status(e.code()) == 2);
  }
}

TEST_CASE("2D overrides and boundary controls") {
  json j = json::parse(bundled("neumann_conservation"));
  j["components"][0]["overrides"] = {{{"node", 0}, {"kind", "dirichlet"}}};
  j.erase("control");
  const auto sc = parse_scenario(j.dump());
  CHECK(sc.model.disc->is_dirichlet(0, 0));
  CHECK(!sc.model.disc->is_dirichlet(0, 1));
  j["components"][0]["overrides"] = {{{"node", 20}, {"kind", "dirichlet"}}};
  CHECK(field_of(j) == "components[0].overrides[0].node");

  json b = json::parse(bundled("saturating"));
  b["control"]["mode"] = "boundary";
  b["control"]["time_hats"] = 2;
  b["control"]["spatial_modes"] = {{{"kind", "side"}, {"side", "right"}}};
  b["control"]["coefficients"] = {1.0, 1.0};
  b["control"].erase("direction");
  const auto bc = parse_scenario(b.dump());
  const auto u = bc.source();
  const auto& disc = *bc.model.disc;
  for (const auto& f : u) {
    for (std::size_t i = 0; i + 1 < f.size(); ++i) CHECK(f[i] == 0.0);
    CHECK(disc.quadrature()[f.size() - 1] * f.back() == doctest::Approx(1.0));
  }
}

TEST_CASE("targets") {
  json j = json::parse(bundled("linear_quadratic"));
  const auto sc = parse_scenario(j.dump());
  const auto& target = sc.control->target;
  REQUIRE(target.size() == 41);
  const auto& disc = *sc.model.disc;
  const std::size_t right = disc.node_count() - 1;
  CHECK(target[0][right] == 0.0);
  CHECK(target[40][right] == doctest::Approx(std::sin(0.5 * M_PI)));
  CHECK(target[20][right] == doctest::Approx(0.5));

  j["control"]["target"] = {{"kind", "state_of"}, {"coefficients", std::vector<double>(12, 0.0)}};
  const auto own = parse_scenario(j.dump());
  const auto zero_state = solve_state(own.model, zero_source(disc, own.model.solver));
  CHECK(reduced_cost(own.control_problem(), own.control->spec) == 0.0);
  (void)zero_state;
  j["control"]["target"] = {{"kind", "separable"}, {"spatial", {{"kind", "constant"}}}, {"temporal", "square"}};
  CHECK(field_of(j) == "control.target.temporal");
}

TEST_CASE("tables and formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(M_PI)) == M_PI);
  Table t{{"a", "b"}, {}};
  t.add_row({1.0, 0.5});
  t.add_row({-2.0, 1e-20});
  CHECK(t.to_csv() == "a,b\n1,0.5\n-2,9.9999999999999995e-21\n");
  CHECK_THROWS_AS(t.add_row({1.0}), Error);

  const auto s = parse_signal_csv("t,v\n0,1\n0.5,2\n1,0\n");
  CHECK(s.size() == 3);
  CHECK(s.value(1) == 2.0);
  CHECK_THROWS_AS(parse_signal_csv("time,value\n0,1\n"), Error);
  CHECK_THROWS_AS(parse_signal_csv("t,v\n0,1\n0,2\n"), Error);
  CHECK_THROWS_AS(parse_signal_csv("t,v\n0,abc\n"), Error);
  CHECK_THROWS_AS(read_text_file("/nonexistent/file.json"), Error);

  CHECK(content_hash("") == "cbf29ce484222325");
  CHECK(content_hash("a") == "af63dc4c8601ec8c");
}

TEST_CASE("trajectory views and snapshot") {
  const auto sc = parse_scenario(bundled("saturating"));
  const auto traj = solve_state(sc.model, sc.source());
  const auto table = trajectory_table(*sc.model.disc, traj);
  CHECK(table.columns == std::vector<std::string>{"t", "z", "S_y", "norm_y"});
  CHECK(table.rows.size() == 81);
  CHECK(table.rows[0][1] == sc.model.hysteresis.z0);
  CHECK(table.rows[10][3] == sc.model.disc->norm(traj.states[10]));

  const auto snap = trajectory_snapshot(*sc.model.disc, traj);
  REQUIRE(snap.size() == 5 * 4 + 81 * 21 * 8);
  std::uint32_t header[5];
  std::memcpy(header, snap.data(), sizeof(header));
  CHECK(header[0] == 1);
  CHECK(header[1] == 21);
  CHECK(header[2] == 1);
  CHECK(header[3] == 1);
  CHECK(header[4] == 81);
  double v;
  std::memcpy(&v, snap.data() + 20 + (40 * 21 + 7) * 8, 8);
  CHECK(v == traj.states[40][7]);

  const auto study = fd_convergence_study(sc.model, sc.source(), sc.direction_source(), sc.lambdas);
  const auto fd = fd_table(study);
  CHECK(fd.columns == std::vector<std::string>{"lambda", "error"});
  CHECK(fd.rows.size() == 5);
  const auto diag = diagnostic_table(sc);
  CHECK(diag.rows.size() == 3);
  CHECK(diag.columns.front() == "theta");
}

TEST_CASE("atomic writes") {
  const auto dir = std::filesystem::temp_directory_path() / "hrd_scenario_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.csv").string();
  write_file_atomic(path, "x\n1\n");
  CHECK(read_text_file(path) == "x\n1\n");
  CHECK(!std::filesystem::exists(path + ".tmp"));
  write_file_atomic(path, "y\n");
  CHECK(read_text_file(path) == "y\n");
  CHECK_THROWS_AS(write_file_atomic("/nonexistent/dir/out.csv", "z"), Error);
  std::filesystem::remove_all(dir);
}
