#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vweb/integrability.hpp"

namespace vweb {

enum class Status { Pass, PassUpToFactor, Mismatch, Error };
std::string to_string(Status s);
// Worse of two statuses (pass < pass_up_to_factor < mismatch < error).
Status worst(Status a, Status b);

struct MemberVerdict {
  std::string derived;
  std::string expected;  // empty when the member matched nothing
  std::string verdict;   // equal | equal_up_to_jet_free_factor | consequence | different
  std::string factor;    // empty unless up to factor
};

struct Check {
  std::string label;
  std::string target;  // catalog id
  bool required = true;
  Status status = Status::Mismatch;
  std::vector<MemberVerdict> members;
  std::vector<std::string> uncovered;  // expected members nothing matched
  std::string note;
};

struct LimitInfo {
  std::string member;
  int k = 0;
  int sharp_k = 0;
  std::optional<int> printed_k;
  bool sharp = false;  // k-1 raised PoleRemains and k gave a nonzero limit
  std::string diagnostic;
};

struct CaseReport {
  std::string id;
  Status status = Status::Error;
  std::vector<std::string> derived;
  std::vector<std::string> expected;
  std::vector<std::string> factors;
  std::vector<Check> checks;
  std::vector<LimitInfo> limits;
  std::vector<std::string> notes;
  std::string error;
  double wall_seconds = 0;
};

Check make_check(const std::string& label, const PdeSystem& derived, const PdeSystem& expected, bool required,
                 const std::string& note = "");
// Sets status, derived/expected/factors from the checks and limits.
void finalize(CaseReport& r);

}  // namespace vweb
