#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "selfsim/recursion.hpp"

namespace selfsim {

struct SuiteOptions {
  uint64_t seed = 7;
  int workers = 1;
};

struct SuiteResult {
  std::string name;
  std::string title;
  CheckReport report;
  std::string details;  // JSON object; identical for identical seeds
  std::string to_json() const;
};

// Verification suites in a fixed order. The first eleven correspond to the
// numbered acceptance criteria; the rest are supporting property checks.
const std::vector<std::string>& suite_names();
// "all", "recursion" (K-recursion, short-section, theta identities) or a
// single name. Throws InvalidInput for unknown names.
std::vector<std::string> expand_suite(const std::string& name);
SuiteResult run_suite(const std::string& name, const SuiteOptions& opt = {});

// Reruns the suites with 1, 2 and all workers plus a repeat at 1 worker and
// compares the serialized results byte for byte. `baseline` (optional)
// supplies already computed results at opt.workers = 1.
CheckReport determinism_check(const std::vector<std::string>& names, uint64_t seed,
                              const std::vector<SuiteResult>& baseline = {});

}  // namespace selfsim
