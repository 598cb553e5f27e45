#pragma once

#include <string>
#include <vector>

namespace filmflow::harness {

struct VerifyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Built-in oracle suites: chart-vs-finite-difference frames, the
/// alpha/beta recursion residuals, the inverse-Jacobian series slopes,
/// the coefficient identity suite, flat-plane annihilation.
std::vector<VerifyResult> run_verification(unsigned long long seed);

bool all_passed(const std::vector<VerifyResult>& results);

}  // namespace filmflow::harness
