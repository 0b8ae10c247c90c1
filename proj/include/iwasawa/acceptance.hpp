#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace iwasawa {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Deterministic description of what was checked and observed.
  std::string detail;
  /// Wall-clock budget in seconds; enforced by callers that time the run.
  double budget_seconds = 0;
};

struct AcceptanceConfig {
  /// Prime, precision and truncation for the probe-style checks.
  int p = 3;
  int N = 16;
  int M = 64;
  int level = 1;
  std::uint64_t seed = 20240607;
};

inline constexpr int kCriterionCount = 11;

/// Budget and name of criterion id (1..kCriterionCount).
CriterionResult criterion_header(int id);

/// Runs one of the computational criteria 1..10.  Throws std::out_of_range
/// for other ids.
CriterionResult run_criterion(int id, const AcceptanceConfig& cfg);

}  // namespace iwasawa
