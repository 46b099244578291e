#include "vweb/models.hpp"

#include <functional>
#include <map>

#include "vweb/errors.hpp"

namespace vweb {

int Pde::jet_order() const {
  int order = 0;
  for (const auto& s : expression.symbols())
    if (s.is_jet() && chart.is_unknown(s.name())) order = std::max(order, s.order());
  return order;
}

const Expr& Spectral::value() const {
  if (infinite_) fail(ErrorKind::InvalidArgument, "the point at infinity has no finite value");
  return value_;
}

Symbol spectral_symbol() { return Symbol::parameter("lambda"); }

Chart chart_p3(std::vector<std::string> u) { return Chart({"p1", "p2", "p3"}, std::move(u)); }
Chart chart_q3(std::vector<std::string> u) { return Chart({"q1", "q2", "q3"}, std::move(u)); }
Chart chart_r3(std::vector<std::string> u) { return Chart({"r1", "r2", "r3"}, std::move(u)); }
Chart chart_p4(std::vector<std::string> u) { return Chart({"p0", "p1", "p2", "p3"}, std::move(u)); }
Chart chart_q4(std::vector<std::string> u) { return Chart({"q0", "q1", "q2", "q3"}, std::move(u)); }

Chart chart_family_a() {
  return Chart({"p1", "p2", "p3"}, {"f"}, {{"lambda1", 0}, {"lambda2", 1}, {"lambda3", 2}});
}

Chart chart_xy(std::vector<std::string> u) { return Chart({"x1", "x2", "y1", "y2"}, std::move(u)); }
Chart chart_xz(std::vector<std::string> u) { return Chart({"x1", "x2", "z1", "z2"}, std::move(u)); }

namespace {

void check_distinct(const std::vector<Expr>& ls) {
  for (std::size_t i = 0; i < ls.size(); ++i)
    for (std::size_t j = i + 1; j < ls.size(); ++j)
      if (ls[i].is_constant() && ls[j].is_constant() && ls[i] == ls[j])
        fail(ErrorKind::DegenerateSpectrum, "spectral values " + std::to_string(i) + " and " + std::to_string(j) +
                                                " coincide");
}

Expr lam() { return Expr(spectral_symbol()); }

}  // namespace

DifferentialForm hirota_form(const Expr& l1, const Expr& l2, const Expr& l3, const Spectral& l4, const Chart& chart) {
  if (chart.dimension() != 3) fail(ErrorKind::ChartMismatch, "the Hirota form lives on a 3-chart");
  std::vector<Expr> ls{l1, l2, l3};
  if (!l4.is_infinite()) ls.push_back(l4.value());
  check_distinct(ls);
  const std::string& fn = chart.unknowns().at(0);
  std::vector<Expr> coeffs(3);
  for (std::size_t i = 0; i < 3; ++i) {
    Expr c = chart.jet(fn, chart.multi_from_positions({i}));
    for (std::size_t j = 0; j < 3; ++j)
      if (j != i) c *= lam() - ls[j];
    if (!l4.is_infinite()) c *= l4.value() - ls[i];
    coeffs[i] = c;
  }
  return DifferentialForm::one_form(chart, coeffs);
}

DifferentialForm family_a_form() {
  Chart c = chart_family_a();
  return hirota_form(c.function("lambda1"), c.function("lambda2"), c.function("lambda3"), Spectral::infinity(), c);
}

namespace {

DifferentialForm d_form(const Expr& a, const Expr& b, const Expr& c, int sign) {
  Chart ch = chart_p3({"g"});
  Expr g1 = ch.d("g", "1"), g2 = ch.d("g", "2"), g3 = ch.d("g", "3");
  Expr ca = (lam() - c) * (lam() - a);
  Expr cb = (lam() - c) * b;
  Expr c3 = (lam() - a).pow(2) + b.pow(2);
  return DifferentialForm::one_form(ch, {ca * g1 + cb * g2, ca * g2 + sign * cb * g1, c3 * g3});
}

}  // namespace

// Real slice p1 = 2 Re z1, p2 = 2 Im z1 of the complex Hirota form with lambda1,2 = a +- ib.
DifferentialForm family_d_form(const Expr& a, const Expr& b, const Expr& c) { return d_form(a, b, c, -1); }
DifferentialForm family_d_form_printed(const Expr& a, const Expr& b, const Expr& c) { return d_form(a, b, c, 1); }

DifferentialForm veronese4_form(const std::vector<Expr>& l, const Spectral& l4, const Chart& chart) {
  if (l.size() != 4 || chart.dimension() != 4) fail(ErrorKind::ChartMismatch, "the quartic form needs four spectral values on a 4-chart");
  std::vector<Expr> ls = l;
  if (!l4.is_infinite()) ls.push_back(l4.value());
  check_distinct(ls);
  const std::string& fn = chart.unknowns().at(0);
  std::vector<Expr> coeffs(4);
  for (std::size_t i = 0; i < 4; ++i) {
    Expr c = chart.jet(fn, chart.multi_from_positions({i}));
    for (std::size_t j = 0; j < 4; ++j)
      if (j != i) c *= lam() - l[j];
    if (!l4.is_infinite()) c *= l4.value() - l[i];
    coeffs[i] = c;
  }
  return DifferentialForm::one_form(chart, coeffs);
}

namespace {

DifferentialForm c_form(bool with_constant_term) {
  Chart ch = chart_q4();
  Expr m = lam() - P("lambda0");
  auto f = [&](const char* i) { return ch.d("f", i); };
  Expr m3 = m.pow(3), m2 = m.pow(2);
  std::vector<Expr> c{m3 * f("0") - m2 * f("1") + m * f("2"), m3 * f("1") - m2 * f("2") + m * f("3"),
                      m3 * f("2") - m2 * f("3"), m3 * f("3")};
  if (with_constant_term) c[0] -= f("3");
  return DifferentialForm::one_form(ch, c);
}

}  // namespace

DifferentialForm veronese4_c_form() { return c_form(true); }
DifferentialForm veronese4_c_form_printed() { return c_form(false); }

std::vector<VectorField> veronese4_distribution() {
  Chart ch = chart_q4({"H"});
  std::vector<VectorField> out;
  for (std::size_t i = 1; i <= 3; ++i) {
    std::vector<Expr> c(4);
    c[i] = Expr(1);
    c[i - 1] = -lam();
    c[3] -= lam() * ch.jet("H", ch.multi_from_positions({i}));
    out.emplace_back(ch, c);
  }
  return out;
}

// ---- catalog ---------------------------------------------------------------

namespace {

using Builder = std::function<PdeSystem()>;

PdeSystem single(const std::string& id, const Chart& chart, const Expr& e, std::vector<Symbol> params = {}) {
  return PdeSystem{id, chart, {Pde{id, chart, e, std::move(params)}}};
}

PdeSystem system(const std::string& id, const Chart& chart, const std::vector<Expr>& es, std::vector<Symbol> params = {}) {
  PdeSystem s{id, chart, {}};
  for (std::size_t i = 0; i < es.size(); ++i) s.members.push_back(Pde{id + "[" + std::to_string(i) + "]", chart, es[i], params});
  return s;
}

// (l_k - l_j) f_i f_jk + (l_i - l_k) f_j f_ik + (l_j - l_i) f_k f_ij, optionally weighted by (l4 - l_.).
Expr hirota_row(const Chart& ch, const std::vector<Expr>& l, std::size_t i, std::size_t j, std::size_t k, const Expr* l4) {
  auto f = [&](std::vector<std::size_t> pos) { return ch.jet("f", ch.multi_from_positions(pos)); };
  auto w = [&](std::size_t m) { return l4 ? *l4 - l[m] : Expr(1); };
  return w(i) * (l[k] - l[j]) * f({i}) * f({j, k}) + w(j) * (l[i] - l[k]) * f({j}) * f({i, k}) +
         w(k) * (l[j] - l[i]) * f({k}) * f({i, j});
}

Expr hh_h1(const Chart& ch, const std::string& fi) {
  auto F = [&](const std::string& fn, std::vector<std::string> l) { return ch.d(fn, l); };
  const std::string f1 = "f1", f2 = "f2";
  return F(fi, {"x1", "y1"}) * (F(f1, {"x2"}) * F(f2, {"y2"}) - F(f2, {"x2"}) * F(f1, {"y2"})) +
         F(fi, {"x1", "y2"}) * (F(f1, {"x2"}) * F(f2, {"y1"}) - F(f2, {"x2"}) * F(f1, {"y1"})) +
         F(fi, {"x2", "y1"}) * (F(f1, {"x1"}) * F(f2, {"y2"}) - F(f2, {"x1"}) * F(f1, {"y2"})) +
         F(fi, {"x2", "y2"}) * (F(f1, {"x1"}) * F(f2, {"y1"}) - F(f2, {"x1"}) * F(f1, {"y1"}));
}

Expr hh_h2(const Chart& ch, const std::string& fi) {
  auto F = [&](const std::string& fn, std::vector<std::string> l) { return ch.d(fn, l); };
  const std::string f1 = "f1", f2 = "f2";
  Expr lhs = F(fi, {"z1", "z1"}) * (F(f1, {"x2"}) * F(f2, {"z2"}) - F(f2, {"x2"}) * F(f1, {"z2"})) +
             F(fi, {"z1", "z2"}) * (F(f1, {"x2"}) * F(f2, {"z1"}) - F(f2, {"x2"}) * F(f1, {"z1"}) +
                                    F(f1, {"x1"}) * F(f2, {"z2"}) - F(f2, {"x1"}) * F(f1, {"z2"})) +
             F(fi, {"z2", "z2"}) * (F(f1, {"x1"}) * F(f2, {"z1"}) - F(f2, {"x1"}) * F(f1, {"z1"}));
  Expr rhs = F(fi, {"x1", "z2"}) * (F(f2, {"z2"}) * F(f1, {"z1"}) - F(f1, {"z2"}) * F(f2, {"z1"})) +
             F(fi, {"x2", "z1"}) * (F(f2, {"z1"}) * F(f1, {"z2"}) - F(f1, {"z1"}) * F(f2, {"z2"}));
  return lhs - rhs;
}

Expr hh_h3(const Chart& ch, const std::string& ri) {
  auto R = [&](const std::string& fn, std::vector<std::string> l) { return ch.d(fn, l); };
  return R(ri, {"z1", "z1"}) * R("R1", {"z2"}) + R(ri, {"z2", "z2"}) * R("R2", {"z1"}) -
         R(ri, {"z1", "z2"}) * (R("R2", {"z2"}) - R("R1", {"z1"})) - 2 * (R(ri, {"x2", "z1"}) - R(ri, {"x1", "z2"}));
}

const std::map<std::string, Builder>& builders() {
  static const std::map<std::string, Builder> table = [] {
    std::map<std::string, Builder> t;
    t["hirota"] = [] {
      Chart c = chart_p3();
      auto f = [&](const char* l) { return c.d("f", l); };
      return single("hirota", c, P("a") * f("1") * f("23") + P("b") * f("2") * f("13") + P("c") * f("3") * f("12"),
                    {param("a"), param("b"), param("c")});
    };
    t["hyper_cr"] = [] {
      Chart c = chart_r3({"H"});
      auto H = [&](const char* l) { return c.d("H", l); };
      return single("hyper_cr", c, H("13") - H("22") + H("2") * H("33") - H("3") * H("23"));
    };
    t["eq2"] = [] {
      Chart c = chart_q3();
      auto f = [&](const char* l) { return c.d("f", l); };
      return single("eq2", c, f("3") * f("22") - f("2") * f("23") + P("b") * (f("2") * f("13") - f("1") * f("23")),
                    {param("b")});
    };
    t["eq3"] = [] {
      Chart c = chart_r3();
      auto f = [&](const char* l) { return c.d("f", l); };
      return single("eq3", c, f("3") * f("22") - f("2") * f("23") + f("1") * f("33") - f("3") * f("13"));
    };
    auto eqd1 = [](const std::string& id) {
      Chart c = chart_family_a();
      auto f = [&](const char* l) { return c.d("f", l); };
      Expr l1 = c.function("lambda1"), l2 = c.function("lambda2"), l3 = c.function("lambda3");
      return single(id, c, (l2 - l3) * f("1") * f("23") + (l3 - l1) * f("2") * f("13") + (l1 - l2) * f("3") * f("12"));
    };
    t["eqd1"] = [eqd1] { return eqd1("eqd1"); };
    t["familyA"] = [eqd1] { return eqd1("familyA"); };
    t["eqd2"] = [] {
      Chart c({"q1", "q2", "q3"}, {"f"}, {{"lambda1", 0}, {"lambda3", 2}});
      auto f = [&](const char* l) { return c.d("f", l); };
      Expr A = P("A");
      return single("eqd2", c,
                    (1 - A * c.coord(1)) * (f("3") * f("22") - f("2") * f("23")) +
                        (c.function("lambda3") - c.function("lambda1")) * (f("2") * f("13") - f("1") * f("23")) -
                        2 * A * f("2") * f("3"),
                    {param("A")});
    };
    t["eqd2a"] = [] {
      Chart c({"q1", "q2", "q3"}, {"f"}, {{"lambda1", 0}, {"lambda3", 2}});
      auto f = [&](const char* l) { return c.d("f", l); };
      return single("eqd2a", c,
                    f("3") * f("22") - f("2") * f("23") +
                        (c.function("lambda3") - c.function("lambda1")) * (f("2") * f("13") - f("1") * f("23")) -
                        P("A") * f("2") * f("3"),
                    {param("A")});
    };
    t["familyB"] = [] {
      Chart c({"p1", "p2", "p3"}, {"f"}, {{"lambda2", 1}, {"lambda3", 2}});
      auto f = [&](const char* l) { return c.d("f", l); };
      return single("familyB", c,
                    f("1") * f("13") - f("3") * f("11") +
                        (c.function("lambda2") - c.function("lambda3")) * (f("1") * f("23") - f("2") * f("13")) +
                        c.d("lambda2", "2") * f("1") * f("3"));
    };
    t["eqd3"] = [] {
      Chart c = chart_r3();
      auto f = [&](const char* l) { return c.d("f", l); };
      return single("eqd3", c,
                    f("3") * f("13") - f("1") * f("33") + f("2") * f("23") - f("3") * f("22") -
                        Expr::rational(1, 2) * P("A") * f("2") * f("3"),
                    {param("A")});
    };
    t["eqd3a"] = [] {
      Chart c = chart_r3();
      auto f = [&](const char* l) { return c.d("f", l); };
      return single("eqd3a", c,
                    f("3") * f("13") - f("1") * f("33") +
                        Expr::exp(-P("A") * c.coord(1)) * (f("2") * f("23") - f("3") * f("22")),
                    {param("A")});
    };
    t["familyC"] = [] {
      Chart c({"p1", "p2", "p3"}, {"f"}, {{"lambda3", 2}});
      auto f = [&](const char* l) { return c.d("f", l); };
      Expr p2 = c.coord(1);
      return single("familyC", c,
                    f("1") * f("13") - f("3") * f("11") +
                        Expr::exp(-c.d("lambda3", "3") * p2) * (f("2") * f("12") - f("1") * f("22")) +
                        c.d("lambda3", "33") * p2 * f("1").pow(2));
    };
    t["eqD"] = [] {
      Chart c = chart_p3({"g"});
      auto g = [&](const char* l) { return c.d("g", l); };
      return single("eqD", c,
                    (P("a") - P("c")) * (g("1") * g("23") - g("2") * g("13")) +
                        P("b") * (g("3") * g("11") + g("3") * g("22") - g("1") * g("13") - g("2") * g("23")),
                    {param("a"), param("b"), param("c")});
    };
    t["eqH1"] = [] {
      Chart c = chart_xy();
      return system("eqH1", c, {hh_h1(c, "f1"), hh_h1(c, "f2")});
    };
    t["eqH2"] = [] {
      Chart c = chart_xz();
      return system("eqH2", c, {hh_h2(c, "f1"), hh_h2(c, "f2")});
    };
    t["eqH3"] = [] {
      Chart c = chart_xz({"R1", "R2"});
      return system("eqH3", c, {hh_h3(c, "R1"), hh_h3(c, "R2")});
    };
    t["sys0"] = [] {
      Chart c = chart_r3({"f", "H"});
      return system("sys0", c, {c.d("f", "1") + c.d("H", "2") * c.d("f", "3"), c.d("f", "2") + c.d("H", "3") * c.d("f", "3")});
    };
    t["sys1"] = [] {
      Chart c = chart_p4();
      std::vector<Expr> l{P("lambda0"), P("lambda1"), P("lambda2"), P("lambda3")};
      return system("sys1", c, {hirota_row(c, l, 0, 1, 2, nullptr), hirota_row(c, l, 0, 1, 3, nullptr), hirota_row(c, l, 0, 2, 3, nullptr)},
                    {param("lambda0"), param("lambda1"), param("lambda2"), param("lambda3")});
    };
    t["sys1_finite"] = [] {
      Chart c = chart_p4();
      std::vector<Expr> l{P("lambda0"), P("lambda1"), P("lambda2"), P("lambda3")};
      Expr l4 = P("lambda4");
      return system("sys1_finite", c, {hirota_row(c, l, 0, 1, 2, &l4), hirota_row(c, l, 0, 1, 3, &l4), hirota_row(c, l, 0, 2, 3, &l4)},
                    {param("lambda0"), param("lambda1"), param("lambda2"), param("lambda3"), param("lambda4")});
    };
    t["sys2"] = [] {
      Chart c = chart_q4();
      auto f = [&](const char* l) { return c.d("f", l); };
      return system("sys2", c,
                    {f("1") * f("33") - f("3") * f("13") - f("2") * f("23") + f("3") * f("22"),
                     f("0") * f("33") - f("3") * f("03") - f("2") * f("13") + f("3") * f("12"),
                     f("0") * f("23") - f("3") * f("02") - f("1") * f("13") + f("3") * f("11")});
    };
    t["sys2_printed"] = [] {
      Chart c = chart_q4();
      auto f = [&](const char* l) { return c.d("f", l); };
      return system("sys2_printed", c,
                    {f("1") * f("33") - f("3") * f("13") - f("2") * f("23") + f("3") * f("22"),
                     f("0") * f("33") - f("3") * f("03") - f("2") * f("13") + f("3") * f("11"),
                     f("0") * f("23") - f("3") * f("02") - f("1") * f("13") - f("3") * f("11")});
    };
    t["sys3"] = [] {
      Chart c = chart_q4({"H"});
      auto H = [&](const char* l) { return c.d("H", l); };
      return system("sys3", c,
                    {H("13") - H("22") + H("2") * H("33") - H("3") * H("23"),
                     H("03") - H("12") + H("1") * H("33") - H("3") * H("13"),
                     H("02") - H("11") + H("1") * H("23") - H("2") * H("13")});
    };
    t["sys4"] = [] {
      Chart c = chart_q4({"f", "H"});
      auto f = [&](const char* l) { return c.d("f", l); };
      auto H = [&](const char* l) { return c.d("H", l); };
      return system("sys4", c, {f("0") + H("1") * f("3"), f("1") + H("2") * f("3"), f("2") + H("3") * f("3")});
    };
    return t;
  }();
  return table;
}

}  // namespace

std::vector<std::string> catalog_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, b] : builders()) ids.push_back(id);
  return ids;
}

PdeSystem pde_catalog(const std::string& id) {
  // Equation-number aliases.
  if (id == "eq1") return pde_catalog("hirota");
  if (id == "eq4") return pde_catalog("hyper_cr");
  auto it = builders().find(id);
  if (it == builders().end()) fail(ErrorKind::UnknownPde, "no catalog entry '" + id + "'");
  return it->second();
}

Pde catalog_pde(const std::string& id) {
  PdeSystem s = pde_catalog(id);
  if (s.members.size() != 1) fail(ErrorKind::InvalidArgument, "'" + id + "' is a system of " + std::to_string(s.members.size()) + " equations");
  return s.members.front();
}

PdeSystem specialize(const PdeSystem& s, const Bindings& b) {
  PdeSystem out = s;
  for (auto& m : out.members) {
    m.expression = substitute(m.expression, b);
    std::vector<Symbol> keep;
    for (const auto& p : m.parameters)
      if (!b.count(p)) keep.push_back(p);
    m.parameters = keep;
  }
  return out;
}

}  // namespace vweb
