#pragma once

#include <stdexcept>
#include <string>

namespace selfsim {

// Bad arguments or malformed input data (maps to exit code 65 in the CLI).
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A size or memory budget ran out. `completed` is the last fully finished
// stage (radius for BFS, -1 if none).
struct BudgetExceeded : std::runtime_error {
  int completed;
  BudgetExceeded(const std::string& what, int completed_stage)
      : std::runtime_error(what), completed(completed_stage) {}
};

// An identity that should hold did not.
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace selfsim
