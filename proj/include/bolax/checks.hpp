#pragma once

// Named invariant and property checks behind the `verify` command: each one
// exercises a documented identity or bound and reports its measured slack.

#include <string>
#include <vector>

#include "bolax/config.hpp"

namespace bolax {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

std::vector<CheckResult> run_verification_suite(const ExperimentConfig& cfg);

}  // namespace bolax
