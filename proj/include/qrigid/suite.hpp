#pragma once

#include <functional>

#include "qrigid/json_io.hpp"

namespace qrigid {

struct SuiteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool property = false;  // the checked statement held
  double seconds = 0;
  double budget = 0;      // time limit in seconds
  std::string detail;
  bool pass() const { return property && seconds < budget; }
};

// "smoke" runs reduced sizes; "full" runs every criterion at its stated size.
// Criterion 14 reruns the others and compares the reports byte for byte.
std::vector<CriterionResult> run_suite(const std::string& profile,
                                       const std::function<void(const CriterionResult&)>& on_result = {});
bool known_profile(const std::string& profile);
// Timings are left out so that repeated runs give identical reports.
Json suite_report(const std::string& profile, const std::vector<CriterionResult>& results);
std::string result_line(const CriterionResult& r);

}  // namespace qrigid
