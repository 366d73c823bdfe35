#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace rigidity {

struct Violation {
  std::string code;     // machine-readable, e.g. "enumeration_budget"
  std::string message;  // human-readable detail
};

/// Checks every budget and parameter rule of a config. Never throws; the run
/// may proceed iff the returned list is empty.
std::vector<Violation> validate_config(const nlohmann::json& config);

/// Runs one experiment (or a suite) into out_dir. Deterministic outputs: CSV
/// tables, a summary.json written last, and a plain-text run.log. Returns the
/// process exit code: 0 success, 2 validation failure, 3 numerical failure.
/// Partial outputs are removed on failure.
int run_experiment(const nlohmann::json& config,
                   const std::filesystem::path& out_dir, int threads = 1);

}  // namespace rigidity
