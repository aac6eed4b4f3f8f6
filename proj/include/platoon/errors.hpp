#pragma once

#include <stdexcept>
#include <string>

namespace platoon {

// Bad input: violated precondition, malformed config, out-of-range parameter.
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// The request is well formed but has no admissible answer (empty feasible set,
// unstable closed loop, budget too small).
class Infeasible : public std::runtime_error {
 public:
  explicit Infeasible(const std::string& what) : std::runtime_error(what) {}
};

// An iterative routine failed to converge or produced a result that did not
// survive independent verification.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace platoon
