#include "vweb/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "vweb/degeneration.hpp"
#include "vweb/errors.hpp"

namespace vweb {

namespace {

using Body = std::function<void(CaseReport&)>;

CaseReport timed(const std::string& id, const std::vector<std::string>& notes, const Body& body) {
  auto t0 = std::chrono::steady_clock::now();
  CaseReport r;
  r.id = id;
  r.notes = notes;
  try {
    body(r);
  } catch (const Error& e) {
    r.error = e.what();
  }
  finalize(r);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

PdeSystem reduce(const DifferentialForm& w, const std::string& name) {
  return lambda_reduce(integrability_residual(w), spectral_symbol(), name);
}

PdeSystem hirota_with(const Expr& a, const Expr& b, const Expr& c) {
  return specialize(pde_catalog("hirota"), {{param("a"), a}, {param("b"), b}, {param("c"), c}});
}

VerificationCase form_case(const std::string& id, const std::string& summary, std::function<DifferentialForm()> form,
                           std::function<PdeSystem()> expected, std::vector<std::string> notes = {},
                           std::function<void(CaseReport&, const PdeSystem&)> extra = {}) {
  return {id, "integrability", summary, [=] {
            return timed(id, notes, [&](CaseReport& r) {
              PdeSystem d = reduce(form(), id);
              PdeSystem e = expected();
              r.checks.push_back(make_check(e.name, d, e, true));
              if (extra) extra(r, d);
            });
          }};
}

std::vector<VerificationCase> integrability_cases() {
  const Expr l0 = P("lambda0"), l1 = P("lambda1"), l2 = P("lambda2"), l3 = P("lambda3"), l4 = P("lambda4");
  std::vector<VerificationCase> out;
  out.push_back(form_case(
      "I-formV31", "Hirota form with finite lambda4",
      [=] { return hirota_form(l1, l2, l3, Spectral::finite(l4)); },
      [=] {
        PdeSystem s = hirota_with((l4 - l1) * (l2 - l3), (l4 - l2) * (l3 - l1), (l4 - l3) * (l1 - l2));
        s.name = "hirota";
        return s;
      }));
  out.push_back(form_case("I-formV32", "Hirota form with lambda4 at infinity",
                          [=] { return hirota_form(l1, l2, l3, Spectral::infinity()); },
                          [=] {
                            PdeSystem s = hirota_with(l2 - l3, l3 - l1, l1 - l2);
                            s.name = "hirota";
                            return s;
                          }));
  out.push_back(form_case("I-familyA", "Hirota form with lambda_i univariate in p_i", [] { return family_a_form(); },
                          [] { return pde_catalog("eqd1"); }));
  out.push_back(form_case(
      "I-formV33", "real-slice family D form", [] { return family_d_form(P("a"), P("b"), P("c")); },
      [] { return pde_catalog("eqD"); },
      {"the form with +b(lambda-c) g1 dp2 splits into two equations; the real slice of the complex Hirota form carries -b(lambda-c) g1 dp2"},
      [](CaseReport& r, const PdeSystem&) {
        PdeSystem printed = reduce(family_d_form_printed(P("a"), P("b"), P("c")), "I-formV33-printed");
        r.checks.push_back(make_check("eqD", printed, pde_catalog("eqD"), false, "form with +b(lambda-c) g1 dp2"));
      }));
  out.push_back(form_case("I-alpha4", "quartic Veronese form, lambda4 at infinity",
                          [=] { return veronese4_form({l0, l1, l2, l3}, Spectral::infinity()); },
                          [] { return pde_catalog("sys1"); }));
  out.push_back(form_case(
      "I-formV41", "degenerate Veronese form on the q-chart", [] { return veronese4_c_form(); },
      [] { return pde_catalog("sys2"); }, {"the limit form includes the term -f_3 dq_0"},
      [](CaseReport& r, const PdeSystem& d) {
        r.checks.push_back(make_check("sys2_printed", d, pde_catalog("sys2_printed"), false, "verbatim transcription"));
        PdeSystem bare = reduce(veronese4_c_form_printed(), "I-formV41-printed");
        r.checks.push_back(make_check("sys2", bare, pde_catalog("sys2"), false, "form without the -f_3 dq_0 term"));
      }));
  out.push_back({"I-formV42", "integrability", "Frobenius conditions of the degenerate distribution", [] {
                   return timed("I-formV42", {}, [](CaseReport& r) {
                     PdeSystem d = frobenius_conditions(veronese4_distribution(), spectral_symbol(), "I-formV42");
                     r.checks.push_back(make_check("sys3", d, pde_catalog("sys3"), true));
                   });
                 }});
  return out;
}

std::vector<VerificationCase> cross_cases() {
  std::vector<VerificationCase> out;
  auto make = [](const std::string& id, const std::string& source, const std::string& for_f, const std::string& for_h) {
    return VerificationCase{id, "cross", "cross-compatibility of " + source, [=] {
                              return timed(id, {}, [&](CaseReport& r) {
                                PdeSystem s = pde_catalog(source);
                                PdeSystem no_f = cross_compatibility(s, Eliminate::F);
                                r.checks.push_back(make_check(for_h, no_f, pde_catalog(for_h), true, "f eliminated"));
                                PdeSystem no_h = cross_compatibility(s, Eliminate::H);
                                r.checks.push_back(make_check(for_f, no_h, pde_catalog(for_f), true, "H eliminated"));
                              });
                            }};
  };
  out.push_back(make("X-sys0", "sys0", "eq3", "hyper_cr"));
  out.push_back(make("X-sys4", "sys4", "sys2", "sys3"));
  return out;
}

std::vector<VerificationCase> degeneration_cases() {
  std::vector<VerificationCase> out;
  for (const auto& r : builtin_recipes()) {
    std::string id = r.id;
    out.push_back({id, "degeneration", r.summary, [id] { return run_recipe(builtin_recipe(id)); }});
  }
  return out;
}

nlohmann::ordered_json to_json(const CaseReport& r, bool timing) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["status"] = to_string(r.status);
  j["derived"] = r.derived;
  j["expected"] = r.expected;
  j["factors"] = r.factors;
  auto& checks = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json cj;
    cj["label"] = c.label;
    cj["target"] = c.target;
    cj["required"] = c.required;
    cj["status"] = to_string(c.status);
    auto& ms = cj["members"] = nlohmann::ordered_json::array();
    for (const auto& m : c.members)
      ms.push_back({{"derived", m.derived}, {"expected", m.expected}, {"verdict", m.verdict}, {"factor", m.factor}});
    cj["uncovered"] = c.uncovered;
    if (!c.note.empty()) cj["note"] = c.note;
    checks.push_back(std::move(cj));
  }
  auto& limits = j["limits"] = nlohmann::ordered_json::array();
  for (const auto& l : r.limits) {
    nlohmann::ordered_json lj{{"member", l.member}, {"k", l.k}, {"sharp_k", l.sharp_k}, {"sharp", l.sharp},
                              {"diagnostic", l.diagnostic}};
    if (l.printed_k) lj["printed_k"] = *l.printed_k;
    limits.push_back(std::move(lj));
  }
  j["notes"] = r.notes;
  if (!r.error.empty()) j["error"] = r.error;
  if (timing) j["wall_seconds"] = r.wall_seconds;
  return j;
}

}  // namespace

std::vector<VerificationCase> builtin_cases() {
  std::vector<VerificationCase> all = integrability_cases();
  for (auto& c : degeneration_cases()) all.push_back(std::move(c));
  for (auto& c : cross_cases()) all.push_back(std::move(c));
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return all;
}

CaseReport run_case(const std::string& id) {
  for (const auto& c : builtin_cases())
    if (c.id == id) return c.run();
  fail(ErrorKind::UnknownPde, "no verification case '" + id + "'");
}

std::vector<CaseReport> run_cases(const std::vector<std::string>& ids, unsigned jobs) {
  auto all = builtin_cases();
  std::vector<const VerificationCase*> todo;
  for (const auto& id : ids) {
    auto it = std::find_if(all.begin(), all.end(), [&](const auto& c) { return c.id == id; });
    if (it == all.end()) fail(ErrorKind::UnknownPde, "no verification case '" + id + "'");
    todo.push_back(&*it);
  }
  std::vector<CaseReport> out(todo.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < todo.size();) out[i] = todo[i]->run();
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(todo.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

ReportSummary summarize(const std::vector<CaseReport>& cases) {
  ReportSummary s;
  for (const auto& c : cases) {
    switch (c.status) {
      case Status::Pass: ++s.pass; break;
      case Status::PassUpToFactor: ++s.pass_up_to_factor; break;
      case Status::Mismatch: ++s.mismatch; break;
      case Status::Error: ++s.error; break;
    }
  }
  return s;
}

std::string report_json(const std::vector<CaseReport>& cases, bool include_timing) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  auto& arr = j["cases"] = nlohmann::ordered_json::array();
  for (const auto& c : cases) arr.push_back(to_json(c, include_timing));
  ReportSummary s = summarize(cases);
  j["summary"] = {{"pass", s.pass}, {"pass_up_to_factor", s.pass_up_to_factor}, {"mismatch", s.mismatch}, {"error", s.error}};
  return j.dump(2) + "\n";
}

std::string report_text(const std::vector<CaseReport>& cases) {
  std::ostringstream os;
  for (const auto& c : cases) {
    os << std::left << std::setw(12) << c.id << ' ' << std::setw(18) << to_string(c.status);
    std::vector<std::string> f;
    for (const auto& x : c.factors)
      if (!x.empty()) f.push_back(x);
    if (!f.empty()) {
      os << " factor";
      for (const auto& x : f) os << ' ' << x;
    }
    if (!c.error.empty()) os << ' ' << c.error;
    os << '\n';
  }
  ReportSummary s = summarize(cases);
  os << "pass " << s.pass << ", pass_up_to_factor " << s.pass_up_to_factor << ", mismatch " << s.mismatch << ", error "
     << s.error << '\n';
  return os.str();
}

}  // namespace vweb
