#pragma once

#include <string>
#include <vector>

namespace twinbeam {

struct CheckResult {
  std::string name;
  double measured = 0.0;   // residual, error, or measured order
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;      // bound direction, units, counts
};

struct ValidationOptions {
  double tol_scale = 1.0;       // multiplies every tolerance
  double fault_inject = 0.0;    // perturbation added to one T entry in the
                                // semigroup check; 0 disables
  unsigned long long seed = 0x7b1abe4d;
};

// Cross-validation oracle suite over randomized inputs plus the built-in
// default configuration. Deterministic for a fixed seed.
std::vector<CheckResult> run_validation(const ValidationOptions& opts = {});

bool all_passed(const std::vector<CheckResult>& results);

// Fixed-width table, one line per check, PASS/FAIL first.
std::string format_validation_table(const std::vector<CheckResult>& results);

}  // namespace twinbeam
