#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vweb/case_report.hpp"

namespace vweb {

struct VerificationCase {
  std::string id;
  std::string group;  // integrability | degeneration | cross
  std::string summary;
  std::function<CaseReport()> run;
};

// Every registered case, sorted by id.
std::vector<VerificationCase> builtin_cases();
// Throws UnknownPde for an unregistered id.
CaseReport run_case(const std::string& id);
// Runs on up to `jobs` threads; the result is sorted by id regardless of completion order.
std::vector<CaseReport> run_cases(const std::vector<std::string>& ids, unsigned jobs = 1);

struct ReportSummary {
  std::size_t pass = 0, pass_up_to_factor = 0, mismatch = 0, error = 0;
};
ReportSummary summarize(const std::vector<CaseReport>& cases);

// {version, cases, summary}; timing fields are left out when include_timing is false.
std::string report_json(const std::vector<CaseReport>& cases, bool include_timing = true);
// One line per case.
std::string report_text(const std::vector<CaseReport>& cases);

}  // namespace vweb
