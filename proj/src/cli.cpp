#include "vweb/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vweb/degeneration.hpp"
#include "vweb/errors.hpp"
#include "vweb/numeric.hpp"
#include "vweb/parser.hpp"
#include "vweb/report.hpp"

namespace vweb {

namespace {

constexpr int kOk = 0, kMismatch = 1, kUsage = 2;

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

// Integers and fractions exactly, anything else as a float.
double parse_real(const std::string& text) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), ::isspace), t.end());
  if (t.find_first_of(".eE") == std::string::npos) return parse_scalar(t).get_d();
  double v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) fail(ErrorKind::InvalidArgument, "not a number: '" + text + "'");
  return v;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& it : items) {
    auto eq = it.find('=');
    if (eq == std::string::npos || eq == 0) fail(ErrorKind::InvalidArgument, "parameters are written name=value, got '" + it + "'");
    out[it.substr(0, eq)] = parse_real(it.substr(eq + 1));
  }
  return out;
}

std::pair<double, double> parse_box(const std::string& s) {
  auto parts = split(s, ':');
  if (parts.size() != 2) fail(ErrorKind::InvalidArgument, "box is written a:b");
  double a = parse_real(parts[0]), b = parse_real(parts[1]);
  if (!(a < b)) fail(ErrorKind::InvalidArgument, "box needs a < b");
  return {a, b};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << text;
}

void print_system(std::ostream& out, const PdeSystem& s) {
  out << s.name << ": " << s.members.size() << (s.members.size() == 1 ? " member\n" : " members\n");
  for (const auto& m : s.members) out << "  " << render(m.expression, &s.chart) << "\n";
}

// ---- subcommands -----------------------------------------------------------

struct VerifyArgs {
  std::string case_id = "all";
  std::string json;
  unsigned jobs = 1;
  bool no_timing = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  std::vector<std::string> ids;
  if (a.case_id == "all") {
    for (const auto& c : builtin_cases()) ids.push_back(c.id);
  } else {
    for (const auto& id : split(a.case_id, ',')) ids.push_back(id);
  }
  auto reports = run_cases(ids, a.jobs);
  std::string json = report_json(reports, !a.no_timing);
  if (a.json == "-") out << json;
  else out << report_text(reports);
  if (!a.json.empty() && a.json != "-") write_file(a.json, json);
  for (const auto& r : reports)
    if (r.status == Status::Mismatch || r.status == Status::Error) return kMismatch;
  return kOk;
}

struct ReduceArgs {
  std::string form;
  std::string lambda;
  std::string lambda4 = "inf";
};

int cmd_reduce(const ReduceArgs& a, std::ostream& out) {
  Chart scratch({"p1", "p2", "p3"}, {});
  std::vector<Expr> vals;
  if (!a.lambda.empty())
    for (const auto& v : split(a.lambda, ',')) vals.push_back(parse_symbolic(v, scratch));
  auto pick = [&](std::vector<Expr> defaults) {
    if (vals.empty()) return defaults;
    if (vals.size() < defaults.size()) fail(ErrorKind::InvalidArgument, "--lambda needs " + std::to_string(defaults.size()) + " values");
    return vals;
  };
  auto l4 = [&](std::size_t extra_index) {
    if (vals.size() > extra_index) return Spectral::finite(vals[extra_index]);
    if (a.lambda4 == "inf") return Spectral::infinity();
    return Spectral::finite(parse_symbolic(a.lambda4, scratch));
  };
  auto reduce = [&](const DifferentialForm& w) { return lambda_reduce(integrability_residual(w), spectral_symbol(), a.form); };
  PdeSystem result;
  if (a.form == "hirota") {
    auto l = pick({P("lambda1"), P("lambda2"), P("lambda3")});
    if (l.size() > 4) fail(ErrorKind::InvalidArgument, "hirota takes at most four lambdas");
    result = reduce(hirota_form(l[0], l[1], l[2], l4(3)));
  } else if (a.form == "familyA") {
    result = reduce(family_a_form());
  } else if (a.form == "familyD") {
    auto l = pick({P("a"), P("b"), P("c")});
    if (l.size() != 3) fail(ErrorKind::InvalidArgument, "familyD takes three values a,b,c");
    result = reduce(family_d_form(l[0], l[1], l[2]));
  } else if (a.form == "veronese4") {
    auto l = pick({P("lambda0"), P("lambda1"), P("lambda2"), P("lambda3")});
    if (l.size() > 5) fail(ErrorKind::InvalidArgument, "veronese4 takes at most five lambdas");
    result = reduce(veronese4_form({l[0], l[1], l[2], l[3]}, l4(4)));
  } else if (a.form == "veronese4C") {
    result = reduce(veronese4_c_form());
  } else if (a.form == "veronese4D") {
    result = frobenius_conditions(veronese4_distribution(), spectral_symbol(), a.form);
  } else {
    fail(ErrorKind::InvalidArgument, "unknown form '" + a.form + "'");
  }
  print_system(out, result);
  return kOk;
}

struct ResidualArgs {
  std::string pde;
  std::vector<std::string> params;
  std::vector<std::string> solutions;
  std::string box = "-1:1";
  std::size_t n = 17;
  double tol = -1;
};

int cmd_residual(const ResidualArgs& a, std::ostream& out) {
  PdeSystem sys = pde_catalog(a.pde);
  auto params = parse_params(a.params);
  auto [lo, hi] = parse_box(a.box);
  std::vector<ClosedFormSolution> sols;
  for (const auto& s : a.solutions) {
    auto eq = s.find('=');
    std::string unknown, text = s;
    if (eq != std::string::npos) {
      unknown = s.substr(0, eq);
      text = s.substr(eq + 1);
    } else {
      if (sys.chart.unknowns().size() != 1) fail(ErrorKind::InvalidArgument, "name the unknown: --solution name=expr");
      unknown = sys.chart.unknowns()[0];
    }
    sols.push_back({unknown, parse_numeric(text), {}});
  }
  bool ok = true;
  for (const auto& m : sys.members) {
    auto r = residual_closed_form(m, sols, params, lo, hi, a.n);
    out << m.name << ": max_abs " << num(r.max_abs) << " samples " << r.samples;
    if (r.symbolic) out << " symbolic " << render(*r.symbolic, &m.chart);
    out << "\n";
    if (a.tol >= 0 && r.max_abs > a.tol) ok = false;
  }
  return ok ? kOk : kMismatch;
}

struct GridArgs {
  std::string pde;
  std::vector<std::string> inputs;
  std::vector<std::string> params;
  double tol = -1;
};

int cmd_residual_grid(const GridArgs& a, std::ostream& out) {
  PdeSystem sys = pde_catalog(a.pde);
  std::vector<Grid> grids;
  for (const auto& path : a.inputs) grids.push_back(Grid::from_json(read_file(path)));
  std::vector<const Grid*> ptrs;
  for (const auto& g : grids) ptrs.push_back(&g);
  auto params = parse_params(a.params);
  bool ok = true;
  for (const auto& m : sys.members) {
    auto r = residual_grid(m, ptrs, params);
    out << m.name << ": max_abs " << num(r.max_abs) << " l2 " << num(r.l2) << " interior " << r.interior << " skipped "
        << r.skipped << "\n";
    if (a.tol >= 0 && r.max_abs > a.tol) ok = false;
  }
  return ok ? kOk : kMismatch;
}

struct BacklundArgs {
  std::string direction;
  std::string input;
  std::string initial;
  std::string output;
  std::string box = "-1:1";
  std::string h;
  bool check = false;
  double tol = 1e-3;
};

int cmd_backlund(const BacklundArgs& a, std::ostream& out) {
  bool four = a.direction == "h2f4" || a.direction == "f2h4";
  bool h2f = a.direction == "h2f" || a.direction == "h2f4";
  if (!four && a.direction != "h2f" && a.direction != "f2h")
    fail(ErrorKind::InvalidArgument, "direction is one of h2f, f2h, h2f4, f2h4");
  std::size_t dim = four ? 4 : 3;
  Chart chart = four ? chart_q4({h2f ? "H" : "f"}) : chart_p3({h2f ? "H" : "f"});
  auto [lo, hi] = parse_box(a.box);
  double h = a.h.empty() ? (four ? 1.0 / 16 : 1.0 / 64) : parse_real(a.h);

  std::optional<Grid> grid;
  std::optional<ClosedFormSolution> closed;
  if (std::filesystem::is_regular_file(a.input)) {
    grid = Grid::from_json(read_file(a.input));
    if (grid->dimension() != dim) fail(ErrorKind::ShapeMismatch, "input grid dimension does not match the direction");
  } else {
    closed = ClosedFormSolution{chart.unknowns()[0], parse_numeric(a.input), {}};
  }

  bool ok = true;
  if (closed && a.check) {
    PdeSystem premise = backlund_target(dim, !h2f);
    double worst = 0;
    for (const auto& m : premise.members) worst = std::max(worst, residual_closed_form(m, {*closed}, {}, lo, hi).max_abs);
    out << "premise " << premise.name << ": max_abs " << num(worst) << "\n";
    if (worst > 1e-8) ok = false;
  }

  BacklundResult r = [&] {
    if (h2f) {
      std::vector<Axis> axes = grid ? grid->axes() : box_axes(dim, lo, hi, h);
      NumExpr init = parse_numeric(a.initial.empty() ? chart.coordinate(dim - 1).name() : a.initial);
      CompiledForm init_form(init, chart, {});
      auto initial = [&](double y) {
        std::vector<double> x(dim, 0.0);
        x[dim - 1] = y;
        return init_form.value(x);
      };
      if (grid) return backlund_h_to_f(GridField(*grid), axes, initial);
      return backlund_h_to_f(ClosedFormField(*closed, chart), axes, initial);
    }
    if (grid) return backlund_f_to_h(*grid);
    CompiledForm f(closed->expression, chart, {});
    return backlund_f_to_h(Grid::sample(box_axes(dim, lo, hi, h), "f", [&](const std::vector<double>& x) { return f.value(x); }));
  }();

  write_file(a.output, r.output.to_json());
  PdeSystem target = backlund_target(dim, h2f);
  out << "output " << r.output.unknown() << ": " << r.output.size() << " nodes, " << r.missing << " missing\n";
  for (std::size_t i = 0; i < r.residuals.size(); ++i) {
    const auto& g = r.residuals[i];
    out << target.members[i].name << ": max_abs " << num(g.max_abs) << " l2 " << num(g.l2) << " interior " << g.interior
        << " skipped " << g.skipped << "\n";
  }
  if (!h2f) out << "closedness_defect " << num(r.closedness_defect) << "\n";
  if (a.check && r.max_residual > a.tol) ok = false;
  return ok ? kOk : kMismatch;
}

int cmd_list(std::ostream& out) {
  out << "cases:\n";
  for (const auto& c : builtin_cases()) out << "  " << c.id << "  [" << c.group << "] " << c.summary << "\n";
  out << "catalog:\n";
  for (const auto& id : catalog_ids()) out << "  " << id << "\n";
  out << "forms:\n  hirota\n  familyA\n  familyD\n  veronese4\n  veronese4C\n  veronese4D\n";
  out << "backlund directions:\n  h2f\n  f2h\n  h2f4\n  f2h4\n";
  return kOk;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::SyntaxError:
    case ErrorKind::UnknownIdentifier:
    case ErrorKind::TranscendentalInSymbolicContext:
    case ErrorKind::UnknownPde:
    case ErrorKind::InvalidArgument: return kUsage;
    default: return kMismatch;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Veronese web verification tool", "vweb"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the integrability and degeneration case matrix");
  verify->add_option("--case", va.case_id, "case id, comma-separated ids, or all");
  verify->add_option("--json", va.json, "write the JSON report here ('-' prints it instead of the table)");
  verify->add_option("--jobs", va.jobs, "worker threads")->check(CLI::PositiveNumber);
  verify->add_flag("--no-timing", va.no_timing, "leave wall times out of the JSON report");

  ReduceArgs ra;
  auto* reduce = app.add_subcommand("reduce", "derive the equations of a form");
  reduce->add_option("--form", ra.form, "hirota|familyA|familyD|veronese4|veronese4C|veronese4D")->required();
  reduce->add_option("--lambda", ra.lambda, "comma-separated values");
  reduce->add_option("--lambda4", ra.lambda4, "value or inf");

  ResidualArgs rs;
  auto* residual = app.add_subcommand("residual", "closed-form residual");
  residual->add_option("--pde", rs.pde, "catalog id")->required();
  residual->add_option("--param", rs.params, "name=value")->take_all();
  residual->add_option("--solution", rs.solutions, "expression, or unknown=expression")->required();
  residual->add_option("--box", rs.box, "sample box a:b");
  residual->add_option("--n", rs.n, "samples per axis")->check(CLI::Range(2, 1000));
  residual->add_option("--tol", rs.tol, "fail above this residual");

  GridArgs ga;
  auto* rgrid = app.add_subcommand("residual-grid", "finite-difference residual of gridded unknowns");
  rgrid->add_option("--pde", ga.pde, "catalog id")->required();
  rgrid->add_option("--input", ga.inputs, "grid file, one per unknown")->required();
  rgrid->add_option("--param", ga.params, "name=value")->take_all();
  rgrid->add_option("--tol", ga.tol, "fail above this residual");

  BacklundArgs ba;
  auto* backlund = app.add_subcommand("backlund", "construct f from H or H from f");
  backlund->add_option("--direction", ba.direction, "h2f|f2h|h2f4|f2h4")->required();
  backlund->add_option("--input", ba.input, "grid file or closed-form expression")->required();
  backlund->add_option("--initial", ba.initial, "f on the last axis (default: the last coordinate)");
  backlund->add_option("--output", ba.output, "grid file to write")->required();
  backlund->add_option("--box", ba.box, "box a:b for closed-form input");
  backlund->add_option("--spacing", ba.h, "grid spacing for closed-form input");
  backlund->add_flag("--check", ba.check, "check the premise and the constructed residual");
  backlund->add_option("--tol", ba.tol, "residual tolerance for --check");

  auto* list = app.add_subcommand("list", "print case, catalog and form ids");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(va, out);
    if (reduce->parsed()) return cmd_reduce(ra, out);
    if (residual->parsed()) return cmd_residual(rs, out);
    if (rgrid->parsed()) return cmd_residual_grid(ga, out);
    if (backlund->parsed()) return cmd_backlund(ba, out);
    if (list->parsed()) return cmd_list(out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e);
  }
  return kUsage;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace vweb
