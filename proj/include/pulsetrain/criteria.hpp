#pragma once

#include <functional>
#include <string>
#include <vector>

namespace pulsetrain {

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::string summary;
  /// Tolerances are multiplied by `tolerance_scale`.
  std::function<CriterionResult(double tolerance_scale)> run;
};

/// Acceptance criteria 1..11 in order.
const std::vector<Criterion>& acceptance_criteria();

/// Looks up by name or number; nullptr when unknown.
const Criterion* find_criterion(const std::string& key);

}  // namespace pulsetrain
