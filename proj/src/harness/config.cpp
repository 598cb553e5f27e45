#include "filmflow/harness/config.hpp"

#include <json.hpp>
#include <fstream>
#include <set>
#include <sstream>

#include "filmflow/errors.hpp"

namespace filmflow::harness {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::string& path,
                  const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ConfigInvalid("unknown key '" + path + "." + it.key() + "'");
  }
}

double num(const json& obj, const std::string& path, const std::string& key,
           std::optional<double> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigInvalid("missing '" + path + "." + key + "'");
  }
  if (!obj[key].is_number())
    throw ConfigInvalid("'" + path + "." + key + "' must be a number");
  return obj[key].get<double>();
}

double param(const std::vector<std::pair<std::string, double>>& ps,
             const std::string& key, std::optional<double> fallback = {}) {
  for (const auto& [k, v] : ps)
    if (k == key) return v;
  if (fallback) return *fallback;
  throw ConfigInvalid("missing chart/gap parameter '" + key + "'");
}

}  // namespace

geometry::ChartPtr ScenarioConfig::make_chart() const {
  const auto& ps = chart_params;
  if (chart_name == "plane") return geometry::make_plane();
  if (chart_name == "inclined_plane")
    return geometry::make_inclined_plane(param(ps, "c0", 0.0),
                                         param(ps, "c1", 0.0),
                                         param(ps, "c2", 0.0));
  if (chart_name == "translating_plane")
    return geometry::make_translating_plane(param(ps, "v"), param(ps, "d1", 1.0),
                                            param(ps, "d2", 0.0));
  if (chart_name == "tilting_plane")
    return geometry::make_tilting_plane(param(ps, "gamma"));
  if (chart_name == "cylinder")
    return geometry::make_cylinder(param(ps, "radius", 2.0),
                                   param(ps, "angle_scale", 1.0),
                                   param(ps, "angle_offset", 0.0));
  if (chart_name == "torus")
    return geometry::make_torus(
        param(ps, "major_radius", 2.0), param(ps, "minor_radius", 0.5),
        param(ps, "su", 1.0), param(ps, "sv", 1.0), param(ps, "u0", 0.25),
        param(ps, "v0", 0.35));
  throw ConfigInvalid("unknown chart '" + chart_name + "'");
}

geometry::GapPtr ScenarioConfig::make_gap() const {
  const auto& ps = gap_params;
  geometry::GapPtr g;
  if (gap_name == "constant")
    g = geometry::make_constant_gap(param(ps, "a", 1.0));
  else if (gap_name == "linear")
    g = geometry::make_linear_gap(param(ps, "a"), param(ps, "b", 0.0),
                                  param(ps, "c", 0.0));
  else if (gap_name == "cosine")
    g = geometry::make_cosine_gap(param(ps, "a"), param(ps, "b"),
                                  static_cast<int>(param(ps, "k1", 1)),
                                  static_cast<int>(param(ps, "k2", 1)));
  else if (gap_name == "squeeze")
    g = geometry::make_squeeze_gap(param(ps, "a"), param(ps, "b"),
                                   param(ps, "omega"));
  else if (gap_name == "wavy_wedge")
    g = geometry::make_wavy_wedge_gap(param(ps, "a"), param(ps, "b"),
                                      param(ps, "c"), param(ps, "omega"));
  else
    throw ConfigInvalid("unknown gap law '" + gap_name + "'");
  if (!(g->h_min() > 0.0))
    throw ConfigInvalid("gap law '" + gap_name +
                        "' is not positive on the whole domain");
  return g;
}

fd::BoundarySpec ScenarioConfig::traction_edges() const {
  auto kind_of = [&](const std::optional<std::string>& edge) {
    const std::string& v = edge.value_or(traction.boundaries);
    return v == "dirichlet" ? fd::BcKind::Dirichlet : fd::BcKind::ZeroGradient;
  };
  fd::BoundarySpec spec;
  spec.left = kind_of(traction.edge_left);
  spec.right = kind_of(traction.edge_right);
  spec.bottom = kind_of(traction.edge_bottom);
  spec.top = kind_of(traction.edge_top);
  return spec;
}

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
  }
  require_keys(root, "$",
               {"schema_version", "chart", "gap", "epsilon", "model", "regime",
                "fluid", "grid", "time", "output", "seed"});

  ScenarioConfig c;
  c.schema_version = root.contains("schema_version")
                         ? root["schema_version"].get<int>()
                         : 1;
  if (c.schema_version != 1)
    throw ConfigInvalid("unsupported schema_version " +
                        std::to_string(c.schema_version));

  if (!root.contains("chart")) throw ConfigInvalid("missing '$.chart'");
  {
    const auto& ch = root["chart"];
    require_keys(ch, "$.chart", {"name", "params"});
    c.chart_name = ch.at("name").get<std::string>();
    if (ch.contains("params"))
      for (auto it = ch["params"].begin(); it != ch["params"].end(); ++it)
        c.chart_params.emplace_back(it.key(), it.value().get<double>());
  }
  if (!root.contains("gap")) throw ConfigInvalid("missing '$.gap'");
  {
    const auto& gp = root["gap"];
    require_keys(gp, "$.gap", {"name", "params"});
    c.gap_name = gp.at("name").get<std::string>();
    if (gp.contains("params"))
      for (auto it = gp["params"].begin(); it != gp["params"].end(); ++it)
        c.gap_params.emplace_back(it.key(), it.value().get<double>());
  }

  if (!root.contains("epsilon")) throw ConfigInvalid("missing '$.epsilon'");
  if (root["epsilon"].is_number()) {
    c.eps = {root["epsilon"].get<double>()};
  } else if (root["epsilon"].is_array()) {
    for (const auto& e : root["epsilon"]) c.eps.push_back(e.get<double>());
  } else {
    throw ConfigInvalid("'$.epsilon' must be a number or an array");
  }
  if (c.eps.empty()) throw ConfigInvalid("'$.epsilon' must not be empty");
  for (double e : c.eps)
    if (!(e > 1e-4) || !(e <= 0.5))
      throw ConfigInvalid("'$.epsilon' value " + std::to_string(e) +
                          " outside (1e-4, 0.5]");

  const std::string model = root.contains("model")
                                ? root["model"].get<std::string>()
                                : "lubrication";
  if (model == "lubrication")
    c.model = ModelKind::Lubrication;
  else if (model == "shallow_water")
    c.model = ModelKind::ShallowWater;
  else if (model == "new_model")
    c.model = ModelKind::NewModel;
  else
    throw ConfigInvalid("unknown model '" + model + "'");

  if (!root.contains("regime")) throw ConfigInvalid("missing '$.regime'");
  {
    const auto& rg = root["regime"];
    c.regime = rg.at("type").get<std::string>();
    if (c.regime == "velocity") {
      require_keys(rg, "$.regime", {"type", "V", "W", "pressure_trace"});
      if (rg.contains("V")) {
        c.velocity.V[0] = rg["V"].at(0).get<double>();
        c.velocity.V[1] = rg["V"].at(1).get<double>();
      }
      if (rg.contains("W")) {
        c.velocity.W[0] = rg["W"].at(0).get<double>();
        c.velocity.W[1] = rg["W"].at(1).get<double>();
      }
      if (rg.contains("pressure_trace")) {
        const auto& tr = rg["pressure_trace"];
        require_keys(tr, "$.regime.pressure_trace", {"type", "value"});
        c.velocity.trace_type = tr.at("type").get<std::string>();
        if (c.velocity.trace_type != "zero" &&
            c.velocity.trace_type != "constant")
          throw ConfigInvalid("unknown pressure_trace type '" +
                              c.velocity.trace_type + "'");
        c.velocity.trace_value = num(tr, "$.regime.pressure_trace", "value", 0.0);
      }
    } else if (c.regime == "traction") {
      require_keys(rg, "$.regime",
                   {"type", "pi0", "pi1_offset", "C1R", "s0", "V_init",
                    "boundaries"});
      if (rg.contains("pi0")) {
        const auto& p0 = rg["pi0"];
        require_keys(p0, "$.regime.pi0", {"type", "value", "amplitude"});
        c.traction.pi0_type = p0.at("type").get<std::string>();
        if (c.traction.pi0_type != "constant" &&
            c.traction.pi0_type != "linear_x1" &&
            c.traction.pi0_type != "cosine")
          throw ConfigInvalid("unknown pi0 type '" + c.traction.pi0_type + "'");
        c.traction.pi0_value = num(p0, "$.regime.pi0", "value", 1.0);
        c.traction.pi0_amplitude = num(p0, "$.regime.pi0", "amplitude", 0.0);
      }
      if (rg.contains("pi1_offset"))
        c.traction.pi1_offset = rg["pi1_offset"].get<double>();
      if (rg.contains("C1R")) c.traction.C1R = rg["C1R"].get<double>();
      if (rg.contains("s0")) {
        c.traction.s0 = rg["s0"].get<double>();
        if (c.traction.s0 * c.traction.s0 != 1.0)
          throw ConfigInvalid("'$.regime.s0' must be -1 or +1");
      }
      if (rg.contains("V_init")) {
        c.traction.V_init[0] = rg["V_init"].at(0).get<double>();
        c.traction.V_init[1] = rg["V_init"].at(1).get<double>();
      }
      if (rg.contains("boundaries")) {
        const auto& bd = rg["boundaries"];
        auto check = [](const std::string& v) {
          if (v != "zero_gradient" && v != "dirichlet")
            throw ConfigInvalid("unknown boundaries '" + v + "'");
          return v;
        };
        if (bd.is_string()) {
          c.traction.boundaries = check(bd.get<std::string>());
        } else {
          require_keys(bd, "$.regime.boundaries",
                       {"left", "right", "bottom", "top"});
          if (bd.contains("left"))
            c.traction.edge_left = check(bd["left"].get<std::string>());
          if (bd.contains("right"))
            c.traction.edge_right = check(bd["right"].get<std::string>());
          if (bd.contains("bottom"))
            c.traction.edge_bottom = check(bd["bottom"].get<std::string>());
          if (bd.contains("top"))
            c.traction.edge_top = check(bd["top"].get<std::string>());
        }
      }
    } else {
      throw ConfigInvalid("unknown regime '" + c.regime + "'");
    }
  }

  if (root.contains("fluid")) {
    const auto& fl = root["fluid"];
    require_keys(fl, "$.fluid", {"mu", "rho0", "nu"});
    c.mu = num(fl, "$.fluid", "mu", 1.0);
    c.rho0 = num(fl, "$.fluid", "rho0", 1.0);
    if (!(c.mu > 0.0) || !(c.rho0 > 0.0))
      throw ConfigInvalid("'$.fluid' viscosity and density must be positive");
    c.nu = c.mu / c.rho0;
    if (fl.contains("nu")) {
      const double given = fl["nu"].get<double>();
      if (std::abs(given * c.rho0 - c.mu) > 1e-12 * std::max(1.0, c.mu))
        throw ConfigInvalid("'$.fluid.nu' inconsistent: nu*rho0 != mu");
    }
  } else {
    c.nu = c.mu / c.rho0;
  }

  if (root.contains("grid")) {
    const auto& gr = root["grid"];
    require_keys(gr, "$.grid", {"n1", "n2"});
    c.n1 = static_cast<int>(num(gr, "$.grid", "n1", 65));
    c.n2 = static_cast<int>(num(gr, "$.grid", "n2", 65));
    if (c.n1 < 8 || c.n2 < 8)
      throw ConfigInvalid("'$.grid' node counts must be >= 8");
  }
  if (root.contains("time")) {
    const auto& tm = root["time"];
    require_keys(tm, "$.time", {"dt", "T", "output_every"});
    c.dt = num(tm, "$.time", "dt", 1e-3);
    c.T = num(tm, "$.time", "T", 0.0);
    c.output_every = static_cast<int>(num(tm, "$.time", "output_every", 0));
    if (c.T < 0.0) throw ConfigInvalid("'$.time.T' must be >= 0");
    if (c.T > 0.0 && !(c.dt > 0.0))
      throw ConfigInvalid("'$.time.dt' must be positive");
  }
  if (root.contains("output")) {
    const auto& out = root["output"];
    require_keys(out, "$.output", {"dir"});
    if (out.contains("dir")) c.out_dir = out["dir"].get<std::string>();
  }
  if (root.contains("seed")) c.seed = root["seed"].get<unsigned long long>();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_config(const ScenarioConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["chart"]["name"] = c.chart_name;
  for (const auto& [k, v] : c.chart_params) j["chart"]["params"][k] = v;
  j["gap"]["name"] = c.gap_name;
  for (const auto& [k, v] : c.gap_params) j["gap"]["params"][k] = v;
  j["epsilon"] = c.eps;
  j["model"] = c.model == ModelKind::Lubrication ? "lubrication"
               : c.model == ModelKind::ShallowWater ? "shallow_water"
                                                    : "new_model";
  j["regime"]["type"] = c.regime;
  if (c.regime == "velocity") {
    j["regime"]["V"] = {c.velocity.V[0], c.velocity.V[1]};
    j["regime"]["W"] = {c.velocity.W[0], c.velocity.W[1]};
    j["regime"]["trace"] = {c.velocity.trace_type, c.velocity.trace_value};
  } else {
    j["regime"]["pi0"] = {c.traction.pi0_type, c.traction.pi0_value,
                          c.traction.pi0_amplitude};
    if (c.traction.pi1_offset) j["regime"]["pi1_offset"] = *c.traction.pi1_offset;
    if (c.traction.C1R) j["regime"]["C1R"] = *c.traction.C1R;
    j["regime"]["s0"] = c.traction.s0;
    j["regime"]["V_init"] = {c.traction.V_init[0], c.traction.V_init[1]};
    j["regime"]["boundaries"] = c.traction.boundaries;
  }
  j["fluid"] = {{"mu", c.mu}, {"rho0", c.rho0}};
  j["grid"] = {{"n1", c.n1}, {"n2", c.n2}};
  j["time"] = {{"dt", c.dt}, {"T", c.T}, {"output_every", c.output_every}};
  j["seed"] = c.seed;
  return j.dump();
}

}  // namespace filmflow::harness
