#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "toeplab/report.hpp"

namespace toeplab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  std::vector<std::pair<std::string, Value>> metrics;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  /// Re-run the battery and compare the reports (criterion 11).
  bool determinism = true;
  /// Called as each criterion of the first pass completes.
  std::function<void(const CriterionResult&)> on_result;
};

/// Criteria 1-10 of the built-in acceptance battery.
std::vector<CriterionResult> run_criteria(std::uint64_t seed,
                                          const std::function<void(const CriterionResult&)>& on_result = {});

/// Criteria 1-10 followed by the determinism check 11.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& options);

/// Report of a battery run: one row and one metrics section per criterion.
Report verify_report(const std::vector<CriterionResult>& results, std::uint64_t seed, const nlohmann::json& config);

}  // namespace toeplab
