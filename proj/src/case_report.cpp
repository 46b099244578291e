#include "vweb/case_report.hpp"

#include <algorithm>

namespace vweb {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::PassUpToFactor: return "pass_up_to_factor";
    case Status::Mismatch: return "mismatch";
    case Status::Error: return "error";
  }
  return "error";
}

Status worst(Status a, Status b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

Check make_check(const std::string& label, const PdeSystem& derived, const PdeSystem& expected, bool required,
                 const std::string& note) {
  Check c;
  c.label = label;
  c.target = expected.name;
  c.required = required;
  c.note = note;
  SystemComparison cmp = compare_systems(derived, expected);
  for (std::size_t i = 0; i < derived.members.size(); ++i) {
    const MemberMatch& m = cmp.derived[i];
    MemberVerdict v;
    v.derived = render(derived.members[i].expression, &derived.chart);
    if (m.target >= 0) {
      v.expected = render(expected.members[static_cast<std::size_t>(m.target)].expression, &expected.chart);
      v.verdict = to_string(m.equivalence.verdict);
      if (m.equivalence.verdict == Verdict::EqualUpToFactor) v.factor = m.equivalence.factor_text(&derived.chart);
    } else {
      v.verdict = m.consequence ? "consequence" : "different";
    }
    c.members.push_back(std::move(v));
  }
  for (std::size_t j = 0; j < expected.members.size(); ++j)
    if (!cmp.target_covered[j]) c.uncovered.push_back(render(expected.members[j].expression, &expected.chart));
  c.status = cmp.all_equal ? Status::Pass : cmp.ok ? Status::PassUpToFactor : Status::Mismatch;
  return c;
}

void finalize(CaseReport& r) {
  if (!r.error.empty()) {
    r.status = Status::Error;
    return;
  }
  Status s = Status::Pass;
  bool any = false;
  r.derived.clear();
  r.expected.clear();
  r.factors.clear();
  for (const auto& c : r.checks) {
    if (!c.required) continue;
    any = true;
    s = worst(s, c.status);
    for (const auto& m : c.members) {
      r.derived.push_back(m.derived);
      r.expected.push_back(m.expected);
      r.factors.push_back(m.verdict == "consequence" ? "consequence" : m.factor);
    }
    for (const auto& u : c.uncovered) r.expected.push_back(u);
  }
  for (const auto& l : r.limits)
    if (!l.sharp) s = worst(s, Status::Mismatch);
  r.status = any ? s : Status::Error;
}

}  // namespace vweb
