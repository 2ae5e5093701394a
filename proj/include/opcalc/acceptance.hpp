#pragma once

#include <string>
#include <vector>

namespace opcalc {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool ok = false;
  std::string detail;  // what was checked, or the first failure
  double seconds = 0;
};

// Criteria are numbered 1..10.
std::vector<int> acceptance_ids();
std::string acceptance_title(int id);
// Runs one criterion; exceptions are caught and reported as a failure.
CriterionResult run_criterion(int id);
// "PASS [3] title (1.2 s): detail"
std::string result_line(const CriterionResult& r);

}  // namespace opcalc
