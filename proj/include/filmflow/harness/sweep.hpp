#pragma once

#include "filmflow/harness/config.hpp"

namespace filmflow::harness {

/// Epsilon-sweep outcome: error norms of the new model against the
/// regime's limit solution, fitted log-log slopes, the order-tag
/// magnitude ratios (traction regime), the vertical-closure defects
/// (velocity regime), and per-member runtimes.
struct ConvergenceReport {
  std::string regime;
  std::vector<double> epsilons;
  std::vector<double> err_linf, err_l2;
  double slope_linf = 0.0, slope_l2 = 0.0;
  std::vector<double> ratio_u2_u1, ratio_u3_u2;
  double order_u2_u1 = 0.0, order_u3_u2 = 0.0;
  std::vector<double> closure_defect;
  double closure_order = 0.0;
  std::vector<double> runtime_seconds;  // informational, not hashed
};

/// Run the new model once per epsilon and the matching limit module
/// once, compute norms and fit slopes. Requires >= 3 epsilon values and
/// model = new_model; throws ConfigInvalid otherwise. Members run in
/// parallel when threads > 1 (results identical).
ConvergenceReport run_epsilon_sweep(const ScenarioConfig& config,
                                    int threads = 1);

void write_report(const ConvergenceReport& report, const std::string& path);

}  // namespace filmflow::harness
