#pragma once

// Built-in verification suite: twelve end-to-end checks with known answers.

#include <functional>
#include <string>
#include <vector>

namespace crs {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 12;

/// Runs one check (1-based); failures and thrown errors become a failed result.
CriterionResult run_criterion(int id);

std::vector<CriterionResult> run_verify_suite(const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  3  title  (detail)" style line.
std::string format_result(const CriterionResult& r);

}  // namespace crs
