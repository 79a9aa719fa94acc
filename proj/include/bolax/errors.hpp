#pragma once

#include <stdexcept>
#include <string>

namespace bolax {

// Configuration / input-file problems.  CLI maps these to exit code 3.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: non-convergence, singular solve, self-check violation,
// norm explosion.  CLI maps these to exit code 4.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// A verified claim failed (precondition of an experiment, failed check).
// CLI maps these to exit code 2.
struct CheckError : std::runtime_error {
  explicit CheckError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bolax
