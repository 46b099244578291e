#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vweb/cli.hpp"
#include "vweb/integrability.hpp"
#include "vweb/models.hpp"
#include "vweb/numeric.hpp"
#include "vweb/parser.hpp"
#include "vweb/report.hpp"

using namespace vweb;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "vweb_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

// Runs the installed binary; skips when the build did not export its path.
Run binary(const std::vector<std::string>& args) {
  const char* exe = std::getenv("VWEB_CLI");
  if (!exe) SKIP("VWEB_CLI not set");
  std::string cmd = shell_quote(exe);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  fs::path o = scratch("stdout.txt"), e = scratch("stderr.txt");
  cmd += " >" + shell_quote(o.string()) + " 2>" + shell_quote(e.string());
  int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(o), slurp(e)};
}

}  // namespace

TEST_CASE("list names every case, catalog entry and form") {
  Run r = cli({"list"});
  CHECK(r.code == 0);
  for (const auto& c : builtin_cases()) CHECK(r.out.find("  " + c.id + " ") != std::string::npos);
  for (const auto& id : catalog_ids()) CHECK(r.out.find("  " + id + "\n") != std::string::npos);
}

TEST_CASE("every listed case id is accepted by verify") {
  for (const auto& c : builtin_cases()) {
    Run r = cli({"verify", "--case", c.id, "--no-timing"});
    INFO(c.id << "\n" << r.out << r.err);
    CHECK((r.code == 0 || r.code == 1));
    CHECK(r.out.rfind(c.id, 0) == 0);
  }
}

TEST_CASE("every catalog id is accepted by residual") {
  for (const auto& id : catalog_ids()) {
    PdeSystem s = pde_catalog(id);
    std::vector<std::string> args{"residual", "--pde", id, "--n", "3"};
    for (const auto& u : s.chart.unknowns()) args.insert(args.end(), {"--solution", u + "=" + s.chart.coordinate(0).name() + "^2"});
    for (const auto& [fn, at] : s.chart.univariate())
      args.insert(args.end(), {"--solution", fn + "=" + s.chart.coordinate(static_cast<std::size_t>(at)).name()});
    std::set<std::string> params;
    for (const auto& m : s.members)
      for (const auto& p : m.parameters) params.insert(p.name());
    for (const auto& p : params) args.insert(args.end(), {"--param", p + "=1"});
    Run r = cli(args);
    INFO(id << "\n" << r.err);
    CHECK(r.code == 0);
  }
}

TEST_CASE("every form is accepted by reduce") {
  for (const char* form : {"hirota", "familyA", "familyD", "veronese4", "veronese4C", "veronese4D"}) {
    Run r = cli({"reduce", "--form", form});
    INFO(form << "\n" << r.err);
    CHECK(r.code == 0);
  }
}

TEST_CASE("reduce at (0,1,2,inf) prints the (-1,2,-1) Hirota equation") {
  Run r = cli({"reduce", "--form", "hirota", "--lambda", "0,1,2", "--lambda4", "inf"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string head, eq;
  std::getline(lines, head);
  std::getline(lines, eq);
  CHECK(head == "hirota: 1 member");
  Chart c = chart_p3();
  Expr derived = parse_symbolic(eq, c);
  PdeSystem h = specialize(pde_catalog("hirota"), {{param("a"), Expr(-1)}, {param("b"), Expr(2)}, {param("c"), Expr(-1)}});
  CHECK(equivalent_up_to_factor(derived, h.members[0].expression, c).verdict != Verdict::Different);
}

TEST_CASE("closed-form residual of a travelling wave") {
  Run r = cli({"residual", "--pde", "hyper_cr", "--solution", "sin(p3+0.7*p2+0.49*p1)", "--tol", "1e-12"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("hyper_cr: max_abs ", 0) == 0);
  Run bad = cli({"residual", "--pde", "hyper_cr", "--solution", "sin(p3+0.6*p2+0.49*p1)", "--tol", "1e-12"});
  CHECK(bad.code == 1);
}

TEST_CASE("verify S2C3 passes") {
  Run r = cli({"verify", "--case", "S2C3"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("S2C3", 0) == 0);
}

TEST_CASE("verify writes JSON and is deterministic") {
  fs::path a = scratch("a.json"), b = scratch("b.json");
  Run one = cli({"verify", "--case", "all", "--no-timing", "--json", a.string()});
  Run two = cli({"verify", "--case", "all", "--no-timing", "--jobs", "3", "--json", b.string()});
  CHECK(one.code == two.code);
  CHECK(one.out == two.out);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find("wall_seconds") == std::string::npos);
  Run timed = cli({"verify", "--case", "I-formV32", "--json", "-"});
  CHECK(timed.out.find("wall_seconds") != std::string::npos);
}

TEST_CASE("Bäcklund through grid files") {
  fs::path f = scratch("f.json"), h = scratch("h.json");
  Run a = cli({"backlund", "--direction", "h2f", "--input", "p3", "--output", f.string(), "--box", "-1/2:1/2", "--spacing",
               "1/16", "--check"});
  INFO(a.out << a.err);
  CHECK(a.code == 0);
  Grid g = Grid::from_json(slurp(f));
  CHECK(g.unknown() == "f");
  CHECK(g.axes()[0].count == 17);

  Run b = cli({"residual-grid", "--pde", "eq3", "--input", f.string(), "--tol", "1e-8"});
  CHECK(b.code == 0);

  Run c = cli({"backlund", "--direction", "f2h", "--input", f.string(), "--output", h.string(), "--check"});
  CHECK(c.code == 0);
  CHECK(c.out.find("closedness_defect") != std::string::npos);
  Run d = cli({"residual-grid", "--pde", "hyper_cr", "--input", h.string(), "--tol", "1e-8"});
  CHECK(d.code == 0);

  Run e = cli({"backlund", "--direction", "h2f4", "--input", "q3", "--output", f.string(), "--box", "-1/2:1/2", "--check"});
  CHECK(e.code == 0);
}

TEST_CASE("negative Bäcklund check fails") {
  fs::path f = scratch("neg.json");
  Run r = cli({"backlund", "--direction", "h2f", "--input", "0.5*p2^2 + 0.3*p1*p3", "--output", f.string(), "--box",
               "-1/2:1/2", "--spacing", "1/16", "--check"});
  CHECK(r.code == 1);
  CHECK(r.out.find("premise") != std::string::npos);
}

TEST_CASE("usage and parse errors exit with 2") {
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"verify", "--bogus"}).code == 2);
  CHECK(cli({"verify", "--case", "S9"}).code == 2);
  CHECK(cli({"residual", "--pde", "nope", "--solution", "p1"}).code == 2);
  CHECK(cli({"reduce", "--form", "hirota", "--lambda", "0.5,1,2"}).code == 2);
  Run s = cli({"residual", "--pde", "eq3", "--solution", "sin(p1 + )"});
  CHECK(s.code == 2);
  CHECK(s.err == "error: SyntaxError: 1:10: unexpected ')'\n");
  Run t = cli({"reduce", "--form", "hirota", "--lambda", "sin(1),2,3"});
  CHECK(t.code == 2);
  CHECK(t.err.rfind("error: TranscendentalInSymbolicContext", 0) == 0);
}

TEST_CASE("mismatching cases exit with 1") {
  Run r = cli({"verify", "--case", "S3C2"});
  CHECK(r.code == 1);
}

TEST_CASE("the binary reports on the right streams") {
  Run ok = binary({"verify", "--case", "I-formV32", "--no-timing"});
  CHECK(ok.code == 0);
  CHECK(ok.err.empty());
  CHECK(ok.out.rfind("I-formV32", 0) == 0);
  Run bad = binary({"residual", "--pde", "eq3", "--solution", "p1 +"});
  CHECK(bad.code == 2);
  CHECK(bad.out.empty());
  CHECK(bad.err.rfind("error: SyntaxError", 0) == 0);
  CHECK(binary({"verify", "--case", "S5b"}).code == 1);
  CHECK(binary({"--help"}).code == 0);
}
