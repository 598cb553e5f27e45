#pragma once

#include "filmflow/harness/config.hpp"

namespace filmflow::harness {

/// Execute the configured model once and write its artifacts
/// (field CSVs, summary JSON, manifest) into `out_dir`. Deterministic
/// for a fixed config + seed. Returns the list of files written.
std::vector<std::string> run_scenario(const ScenarioConfig& config,
                                      const std::string& out_dir);

/// Write the full coefficient catalogue at time t as CSV rows
/// (i, j, name, value) in bit-stable order.
void dump_coefficients(const ScenarioConfig& config, double t,
                       const std::string& path);

}  // namespace filmflow::harness
