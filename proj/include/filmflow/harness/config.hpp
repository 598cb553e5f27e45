#pragma once

#include <optional>
#include <string>
#include <vector>

#include "filmflow/coeffs/table.hpp"
#include "filmflow/fd/imex.hpp"
#include "filmflow/geometry/chart.hpp"
#include "filmflow/geometry/gap.hpp"

namespace filmflow::harness {

/// Which solver a `run` executes.
enum class ModelKind { Lubrication, ShallowWater, NewModel };

struct VelocityRegimeConfig {
  double V[2] = {0, 0};
  double W[2] = {0, 0};
  // pressure trace on the lateral boundary, in the p^{-2} scale
  std::string trace_type = "zero";  // zero | constant
  double trace_value = 0.0;
};

struct TractionRegimeConfig {
  std::string pi0_type = "constant";  // constant | linear_x1 | cosine
  double pi0_value = 1.0;
  double pi0_amplitude = 0.0;
  std::optional<double> pi1_offset;  // pi1 = pi0 + offset (default 0)
  std::optional<double> C1R;
  double s0 = -1.0;
  double V_init[2] = {0, 0};
  // "zero_gradient" | "dirichlet", all four edges; or per-edge via the
  // object form {"left": ..., "right": ..., "bottom": ..., "top": ...}
  std::string boundaries = "zero_gradient";
  std::optional<std::string> edge_left, edge_right, edge_bottom, edge_top;
};

/// Scenario description parsed from the JSON config. Unknown keys are
/// rejected with the offending path.
struct ScenarioConfig {
  int schema_version = 1;
  std::string chart_name = "plane";
  std::vector<std::pair<std::string, double>> chart_params;
  std::string gap_name = "constant";
  std::vector<std::pair<std::string, double>> gap_params;

  std::vector<double> eps;  // one entry for run, >= 3 for sweep
  ModelKind model = ModelKind::Lubrication;
  std::string regime = "velocity";  // velocity | traction
  VelocityRegimeConfig velocity;
  TractionRegimeConfig traction;

  double mu = 1.0;
  double rho0 = 1.0;
  double nu = 1.0;  // derived: mu / rho0

  int n1 = 65, n2 = 65;
  double dt = 1e-3, T = 0.0;
  int output_every = 0;  // 0: first/last only

  std::string out_dir = "out";
  unsigned long long seed = 0;

  geometry::ChartPtr make_chart() const;
  geometry::GapPtr make_gap() const;
  fd::BoundarySpec traction_edges() const;
};

/// Parse + validate. Throws ConfigInvalid with the JSON path of the
/// offending field.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

/// Canonical serialization used for the manifest hash.
std::string canonical_config(const ScenarioConfig& c);

}  // namespace filmflow::harness
