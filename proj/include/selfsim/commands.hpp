#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/config.hpp"
#include "selfsim/marked_group.hpp"

namespace selfsim {

// Everything a batch run depends on. `params` holds the command specific
// keys (from a config file, overridden by flags).
struct RunConfig {
  uint64_t seed = 7;
  int workers = 1;
  std::string format = "json";  // json | csv
  KeyValueConfig params;
};

struct RunOutput {
  std::vector<std::pair<std::string, std::string>> files;  // name, content
  std::string summary;  // human readable, printed by the CLI
  int status = 0;       // 0, or 70 when a checked identity failed
};

// Commands: ball, traverse, synth, verify, delta, gamma, schedule. Throws
// InvalidInput / BudgetExceeded / InvariantViolation.
RunOutput run_command(const std::string& command, const RunConfig& cfg);

// group = grig (depth), delta (level, lamp or inline lamp keys), gamma
// (level), finite (inline spec) or library (name).
MarkedGroupPtr group_from_config(const KeyValueConfig& cfg);

// Command, parameters, seed, workers and FNV-1a hashes of the outputs. No
// timestamps, so identical configs give identical manifests.
std::string run_manifest(const std::string& command, const RunConfig& cfg, const RunOutput& out);

uint64_t fnv1a(const std::string& data);

}  // namespace selfsim
