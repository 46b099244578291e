#include "vweb/degeneration.hpp"
#include "vweb/errors.hpp"

namespace vweb {

namespace {

const Expr& delta() {
  static const Expr d = P("delta");
  return d;
}
Symbol delta_symbol() { return param("delta"); }

step::Limit limit(std::vector<int> k, std::vector<std::optional<int>> printed = {}) {
  return step::Limit{delta_symbol(), std::move(k), std::move(printed)};
}

step::Compare compare(const std::string& target, Bindings on = {}, bool required = true, std::string note = "") {
  return step::Compare{target, std::move(on), required, std::move(note)};
}

Symbol zero_jet(const Chart& c, const std::string& fn) { return c.jet_symbol(fn, MultiIndex(c.dimension(), 0)); }

PdeSystem hirota_with(const Expr& a, const Expr& b, const Expr& c) {
  Bindings bind{{param("a"), a}, {param("b"), b}, {param("c"), c}};
  return specialize(pde_catalog("hirota"), bind);
}

// p = (s1, s1 + d s2, s1 + 2 d s2 + e s3) on the 3D r-chart.
CoordinateChange triple_change(const Expr& e) {
  Chart r = chart_r3();
  return CoordinateChange(chart_p3(), r, {r.coord(0), r.coord(0) + delta() * r.coord(1), r.coord(0) + 2 * delta() * r.coord(1) + e * r.coord(2)});
}

// p_i = sum_j binom(i,j) delta^j q_j on the 4D chart.
CoordinateChange quartic_change(const Chart& p, const Chart& q) {
  const Expr& d = delta();
  std::vector<Expr> fwd{q.coord(0), q.coord(0) + d * q.coord(1), q.coord(0) + 2 * d * q.coord(1) + d.pow(2) * q.coord(2),
                        q.coord(0) + 3 * d * q.coord(1) + 3 * d.pow(2) * q.coord(2) + d.pow(3) * q.coord(3)};
  return CoordinateChange(p, q, fwd);
}

step::Recombine quartic_rows() {
  return step::Recombine{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {0, 1, 1}, {1, 2, 1}},
                         {"e1", "e2", "e3", "e1+e2", "e2+e3", "e1+2e2+e3"}};
}

LimitRecipe s2c1() {
  LimitRecipe r{"S2C1", "Hirota with a = delta - b, c = -delta; p2 = q1 + delta q2", {}, {}, {}};
  r.source = hirota_with(delta() - P("b"), P("b"), -delta());
  Chart q = chart_q3();
  r.steps = {step::Change{CoordinateChange(chart_p3(), q, {q.coord(0), q.coord(0) + delta() * q.coord(1), q.coord(2)})},
             limit({1}, {2}), compare("eq2")};
  r.notes = {"sharp premultiplier delta^1; the printed intermediate is shifted by one power"};
  return r;
}

LimitRecipe s2c2() {
  LimitRecipe r{"S2C2", "Hirota with a = -gamma, b = delta + gamma, c = -delta; r-coordinates, gamma = delta", {}, {}, {}};
  r.source = hirota_with(-P("gamma"), delta() + P("gamma"), -delta());
  r.steps = {step::Change{triple_change(delta() * P("gamma"))},
             step::Bind{{{param("gamma"), delta()}}},
             limit({3}, {3}),
             step::Change{CoordinateChange::rescaling(chart_r3(), {Expr(1), Expr(1), Expr(2)})},
             compare("eq3")};
  return r;
}

LimitRecipe s2c3() {
  LimitRecipe r{"S2C3", "Hirota with (a,b,c) = delta^2 (-3,4,-1); H = (f - 3p3 + 3p2 - p1)/delta^3", {}, {}, {}};
  const Expr& d = delta();
  r.source = hirota_with(-3 * d.pow(2), 4 * d.pow(2), -d.pow(2));
  Chart rc = chart_r3();
  Chart rh = chart_r3({"H"});
  r.steps = {step::Change{triple_change(d.pow(2))},
             step::Redefine{{"f", "H", rc.coord(0) + 3 * d * rc.coord(1) + 3 * d.pow(2) * rc.coord(2), d.pow(3)}},
             limit({-3}, {6}),
             step::Change{CoordinateChange::rescaling(rh, {Expr(1), Expr(1), Expr(2)})},
             step::Redefine{{"H", "H", Expr(), Expr(6)}},
             compare("hyper_cr")};
  r.notes = {"sharp premultiplier delta^-3 after the H substitution; the printed intermediate carries an extra delta^6"};
  return r;
}

LimitRecipe s3c1() {
  LimitRecipe r{"S3C1", "family A with lambda1 = A p1 + B, lambda2 = A p2 + B + delta; p2 = q1 + delta q2/(1 - A q2)", {}, {}, {}};
  Chart pa = chart_family_a();
  const Expr A = P("A"), B = P("B");
  r.source = pde_catalog("eqd1");
  Chart q({"q1", "q2", "q3"}, {"f"}, {{"lambda1", 0}, {"lambda3", 2}});
  Expr dt = delta() / (1 - A * q.coord(1));
  Bindings on_q{{zero_jet(q, "lambda1"), A * q.coord(0) + B}};
  r.steps = {step::Bind{{{zero_jet(pa, "lambda1"), A * pa.coord(0) + B}, {zero_jet(pa, "lambda2"), A * pa.coord(1) + B + delta()}}},
             step::Change{CoordinateChange(pa, q, {q.coord(0), q.coord(0) + dt * q.coord(1), q.coord(2)})},
             limit({1}, {2}),
             compare("eqd2", on_q),
             step::Change{CoordinateChange(q, q, {q.coord(0), (1 - Expr::exp(-A * q.coord(1))) / A, q.coord(2)})},
             compare("eqd2a", on_q, false, "q2 = (1 - exp(-A s))/A, then s renamed q2")};
  return r;
}

LimitRecipe s3c2() {
  LimitRecipe r{"S3C2", "eqd2 with lambda1 = A q1 + B, lambda3 = A q3 + B + delta; q3 = r1 + dt r2 + dt^2 r3/2", {}, {}, {}};
  const Expr A = P("A"), B = P("B");
  PdeSystem src = pde_catalog("eqd2");
  Chart q = src.chart;
  Chart rc = chart_r3();
  r.source = src;
  Expr dt = delta() / (1 - A * rc.coord(1));
  Expr r2 = rc.coord(1);
  r.steps = {step::Bind{{{zero_jet(q, "lambda1"), A * q.coord(0) + B}, {zero_jet(q, "lambda3"), A * q.coord(2) + B + delta()}}},
             step::Change{CoordinateChange(q, rc,
                                           {rc.coord(0), r2, rc.coord(0) + dt * r2 + Expr::rational(1, 2) * dt.pow(2) * rc.coord(2)})},
             limit({2}),
             compare("eqd3"),
             step::Change{CoordinateChange(rc, rc, {rc.coord(0), (1 - Expr::exp(-A * r2)) / A, 2 * rc.coord(2) * Expr::exp(-A * r2)})},
             compare("eqd3a", {}, false, "r2 = (1 - exp(-A s2))/A, r3 = 2 s3 exp(-A s2), then s renamed r")};
  r.notes = {"the eqd3 limit keeps r2- and r3-dependent coefficients; it agrees with eqd3 only at A = 0"};
  return r;
}

LimitRecipe s4() {
  LimitRecipe r{"S4", "integrability of the real-slice family D form", {}, {}, {}};
  const Expr a = P("a"), b = P("b"), c = P("c");
  r.source = family_d_form(a, b, c);
  r.steps = {step::Reduce{}, compare("eqD")};
  r.notes = {"the form as printed (+b(lambda-c) g1 dp2) splits into two separate equations; the real slice of the complex Hirota form carries -b(lambda-c) g1 dp2"};
  return r;
}

CoordinateChange hh_change() {
  Chart x = chart_xy();
  Chart z = chart_xz();
  return CoordinateChange(x, z, {z.coord(0), z.coord(1), z.coord(0) + delta() * z.coord(2), z.coord(1) + delta() * z.coord(3)});
}

LimitRecipe s5a() {
  LimitRecipe r{"S5a", "hyper-Hermitian equation with y = x + delta z", {}, {}, {}};
  r.source = pde_catalog("eqH1");
  r.steps = {step::Change{hh_change()}, limit({3, 3}), compare("eqH2")};
  return r;
}

LimitRecipe s5b() {
  LimitRecipe r{"S5b", "hyper-Hermitian equation with y = x + delta z and f = x + 2 delta z + delta^2 R", {}, {}, {}};
  r.source = pde_catalog("eqH1");
  Chart z = chart_xz();
  const Expr& d = delta();
  r.steps = {step::Change{hh_change()},
             step::Redefine{{"f1", "R1", z.coord(0) + 2 * d * z.coord(2), d.pow(2)}},
             step::Redefine{{"f2", "R2", z.coord(1) + 2 * d * z.coord(3), d.pow(2)}},
             limit({-1, -1}),
             compare("eqH3")};
  r.notes = {"derived limit differs from the printed system in the sign of R^i_{z2z2} R^2_{z1}"};
  return r;
}

LimitRecipe s6c1() {
  LimitRecipe r{"S6C1", "quartic system with lambda_i = lambda0 + i delta; q-coordinates of divided differences", {}, {}, {}};
  r.source = pde_catalog("sys1");
  Chart q = chart_q4();
  const Expr l0 = P("lambda0");
  r.steps = {step::Bind{{{param("lambda1"), l0 + delta()}, {param("lambda2"), l0 + 2 * delta()}, {param("lambda3"), l0 + 3 * delta()}}},
             step::Change{quartic_change(chart_p4(), q)},
             quartic_rows(),
             limit({6, 6, 6, 5, 5, 4}),
             step::Change{CoordinateChange::rescaling(q, {Expr(1), Expr(1), Expr(2), Expr(6)})},
             compare("sys2"),
             compare("sys2_printed", {}, false, "verbatim transcription")};
  return r;
}

LimitRecipe s6c2() {
  LimitRecipe r{"S6C2", "finite quartic system with lambda_i = lambda0 + i delta (i = 1..4); H = (f - 4p3 + 6p2 - 4p1 + p0)/delta^4", {}, {}, {}};
  r.source = pde_catalog("sys1_finite");
  Chart q = chart_q4();
  Chart qh = chart_q4({"H"});
  const Expr l0 = P("lambda0");
  const Expr& d = delta();
  r.steps = {step::Bind{{{param("lambda1"), l0 + d}, {param("lambda2"), l0 + 2 * d}, {param("lambda3"), l0 + 3 * d}, {param("lambda4"), l0 + 4 * d}}},
             step::Change{quartic_change(chart_p4(), q)},
             step::Redefine{{"f", "H", q.coord(0) + 4 * d * q.coord(1) + 6 * d.pow(2) * q.coord(2) + 4 * d.pow(3) * q.coord(3), d.pow(4)}},
             quartic_rows(),
             limit({-2, -2, -2, -3, -3, -4}),
             step::Change{CoordinateChange::rescaling(qh, {Expr(1), Expr(1), Expr(2), Expr(6)})},
             step::Redefine{{"H", "H", Expr(), Expr(24)}},
             compare("sys3")};
  r.notes = {"source is the quartic system with finite lambda4 (weights lambda4 - lambda_i)"};
  return r;
}

}  // namespace

std::vector<LimitRecipe> builtin_recipes() {
  return {s2c1(), s2c2(), s2c3(), s3c1(), s3c2(), s4(), s5a(), s5b(), s6c1(), s6c2()};
}

LimitRecipe builtin_recipe(const std::string& id) {
  for (auto& r : builtin_recipes())
    if (r.id == id) return r;
  fail(ErrorKind::UnknownPde, "no recipe '" + id + "'");
}

}  // namespace vweb
