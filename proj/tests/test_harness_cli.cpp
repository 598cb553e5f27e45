#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "filmflow/errors.hpp"
#include "filmflow/harness/outputs.hpp"
#include "filmflow/harness/scenario.hpp"
#include "filmflow/harness/sweep.hpp"
#include "filmflow/harness/verify.hpp"

using namespace filmflow;
using namespace filmflow::harness;

namespace {

std::string base_json(const std::string& extra = "") {
  return R"({
    "chart": {"name": "plane", "params": {}},
    "gap": {"name": "constant", "params": {"a": 1.0}},
    "epsilon": [0.1],
    "model": "lubrication",
    "regime": {"type": "velocity", "V": [1.0, 0.0], "W": [0.0, 0.0],
               "pressure_trace": {"type": "zero"}},
    "fluid": {"mu": 0.05, "rho0": 1.0},
    "grid": {"n1": 17, "n2": 17})" +
         extra + "\n}";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(parse_config(base_json()));

  // unknown keys are errors, not warnings
  CHECK_THROWS_AS(parse_config(base_json(R"(, "viscocity": 1.0)")),
                  ConfigInvalid);
  CHECK_THROWS_AS(
      parse_config(
          R"({"chart": {"name": "plane", "param": {}}, "gap": {"name": "constant"},
              "epsilon": [0.1], "regime": {"type": "velocity"}})"),
      ConfigInvalid);

  // epsilon = 0 and out-of-range epsilon
  CHECK_THROWS_AS(parse_config(base_json().replace(base_json().find("[0.1]"),
                                                   5, "[0.0]")),
                  ConfigInvalid);

  // nu inconsistent with mu/rho0
  CHECK_THROWS_AS(
      parse_config(
          R"({"chart": {"name": "plane"}, "gap": {"name": "constant", "params": {"a": 1}},
              "epsilon": [0.1], "regime": {"type": "velocity"},
              "fluid": {"mu": 0.05, "rho0": 1.0, "nu": 0.2}})"),
      ConfigInvalid);

  // gap that is not positive on D
  CHECK_THROWS_AS(
      parse_config(
          R"({"chart": {"name": "plane"}, "gap": {"name": "linear", "params": {"a": 0.3, "b": -1.0}},
              "epsilon": [0.1], "regime": {"type": "velocity"}})")
          .make_gap(),
      ConfigInvalid);

  // s0 must be a sign
  CHECK_THROWS_AS(
      parse_config(
          R"({"chart": {"name": "plane"}, "gap": {"name": "constant", "params": {"a": 1}},
              "epsilon": [0.1], "regime": {"type": "traction", "s0": 0.5}})"),
      ConfigInvalid);
}

TEST_CASE("sweep guards: needs >= 3 decreasing eps and the new model") {
  auto c = parse_config(base_json());
  c.model = ModelKind::NewModel;
  c.eps = {0.2, 0.1};
  CHECK_THROWS_AS(run_epsilon_sweep(c), ConfigInvalid);
  c.eps = {0.1, 0.2, 0.4};
  CHECK_THROWS_AS(run_epsilon_sweep(c), ConfigInvalid);
  c.eps = {0.2, 0.1, 0.05};
  c.model = ModelKind::Lubrication;
  CHECK_THROWS_AS(run_epsilon_sweep(c), ConfigInvalid);
}

TEST_CASE("run is deterministic: byte-identical outputs") {
  auto c = parse_config(base_json());
  c.gap_name = "linear";
  c.gap_params = {{"a", 1.5}, {"b", -0.5}};
  c.n1 = c.n2 = 33;
  const std::string d1 = "/tmp/filmflow_det_a", d2 = "/tmp/filmflow_det_b";
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
  const auto f1 = run_scenario(c, d1);
  const auto f2 = run_scenario(c, d2);
  REQUIRE(f1 == f2);
  for (const auto& f : f1) CHECK(slurp(d1 + "/" + f) == slurp(d2 + "/" + f));
  // column layout of the lubrication CSV
  const std::string csv = slurp(d1 + "/lubrication.csv");
  CHECK(csv.substr(0, csv.find('\n')) ==
        "xi1,xi2,pm2,u1_000,u1_025,u1_050,u1_075,u1_100,"
        "u2_000,u2_025,u2_050,u2_075,u2_100,u3");
}

TEST_CASE("shallow run writes a time series and a drift summary") {
  auto c = parse_config(base_json());
  c.model = ModelKind::ShallowWater;
  c.regime = "traction";
  c.traction.C1R = 0.5;
  c.traction.V_init[0] = 0.5;
  c.T = 0.05;
  c.dt = 1e-3;
  const std::string dir = "/tmp/filmflow_sw";
  std::filesystem::remove_all(dir);
  const auto files = run_scenario(c, dir);
  CHECK(std::filesystem::exists(dir + "/shallow_timeseries.csv"));
  CHECK(std::filesystem::exists(dir + "/summary.json"));
  CHECK(std::filesystem::exists(dir + "/manifest.json"));
  const std::string head = slurp(dir + "/shallow_timeseries.csv").substr(0, 17);
  CHECK(head == "t,node,V1,V2,p0\n0");
}

TEST_CASE("new-model run writes the stack snapshot and residual log") {
  auto c = parse_config(base_json());
  c.model = ModelKind::NewModel;
  const std::string dir = "/tmp/filmflow_nm";
  std::filesystem::remove_all(dir);
  run_scenario(c, dir);
  CHECK(std::filesystem::exists(dir + "/newmodel_stack.csv"));
  CHECK(std::filesystem::exists(dir + "/residuals.json"));
}

TEST_CASE("dump-coeffs: plane curvature columns are exactly zero") {
  auto c = parse_config(base_json());
  c.n1 = c.n2 = 9;
  const std::string path = "/tmp/filmflow_dump_plane.csv";
  dump_coefficients(c, 0.0, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  bool saw_curvature = false;
  while (std::getline(in, line)) {
    const auto p1 = line.find(','), p2 = line.find(',', p1 + 1);
    const auto p3 = line.find(',', p2 + 1);
    const std::string name = line.substr(p2 + 1, p3 - p2 - 1);
    const double value = std::stod(line.substr(p3 + 1));
    if (name == "e" || name == "f" || name == "g" || name == "A1" ||
        name == "A2" || name == "I" || name.rfind("H.", 0) == 0 ||
        name.rfind("kappa0", 0) == 0 || name.rfind("chi0", 0) == 0) {
      saw_curvature = true;
      CHECK(value == 0.0);
    }
  }
  CHECK(saw_curvature);

  // byte-identical on repeat
  const std::string path2 = "/tmp/filmflow_dump_plane2.csv";
  dump_coefficients(c, 0.0, path2);
  CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("dump-coeffs: cylinder frame values match hand computation") {
  auto c = parse_config(base_json());
  c.chart_name = "cylinder";
  c.chart_params = {{"radius", 2.0}};
  c.n1 = c.n2 = 9;
  const std::string path = "/tmp/filmflow_dump_cyl.csv";
  dump_coefficients(c, 0.0, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  int checked = 0;
  while (std::getline(in, line)) {
    const auto p1 = line.find(','), p2 = line.find(',', p1 + 1);
    const auto p3 = line.find(',', p2 + 1);
    const std::string name = line.substr(p2 + 1, p3 - p2 - 1);
    const double value = std::stod(line.substr(p3 + 1));
    auto near = [&](double x) { return std::abs(value - x) < 1e-12; };
    if (name == "E") { CHECK(near(1.0)); ++checked; }
    if (name == "F") { CHECK(near(0.0)); ++checked; }
    if (name == "G") { CHECK(near(4.0)); ++checked; }
    if (name == "g") { CHECK(near(-2.0)); ++checked; }
    if (name == "A0") { CHECK(near(4.0)); ++checked; }
    if (name == "A1") { CHECK(near(2.0)); ++checked; }
  }
  CHECK(checked == 6 * 81);
}

TEST_CASE("verification suite passes") {
  const auto results = run_verification(12345);
  for (const auto& r : results) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.pass);
  }
  CHECK(all_passed(results));
}

TEST_CASE("per-edge boundary configuration") {
  auto c = parse_config(R"({
    "chart": {"name": "plane"},
    "gap": {"name": "constant", "params": {"a": 1.0}},
    "epsilon": [0.1],
    "model": "shallow_water",
    "regime": {"type": "traction", "C1R": 0.1,
               "boundaries": {"left": "dirichlet", "right": "zero_gradient"}}
  })");
  const auto spec = c.traction_edges();
  CHECK(spec.left == fd::BcKind::Dirichlet);
  CHECK(spec.right == fd::BcKind::ZeroGradient);
  CHECK(spec.top == fd::BcKind::ZeroGradient);
  CHECK_THROWS_AS(parse_config(R"({
    "chart": {"name": "plane"},
    "gap": {"name": "constant", "params": {"a": 1.0}},
    "epsilon": [0.1],
    "regime": {"type": "traction", "boundaries": {"west": "dirichlet"}}
  })"), ConfigInvalid);
}
