// Randomized algebraic identities; every generator is seeded, so runs repeat exactly.
#include <catch2/catch_amalgamated.hpp>

#include "vweb/calculus.hpp"
#include "vweb/degeneration.hpp"
#include "vweb/forms.hpp"
#include "vweb/integrability.hpp"
#include "random_forms.hpp"

using namespace vweb;

namespace {

using vweb::testing::Random;

int sign(int p, int q) { return (p * q) % 2 == 0 ? 1 : -1; }

}  // namespace

TEST_CASE("d of d vanishes on 200 random forms") {
  Random r(1001);
  Chart c = chart_p3();
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    int degree = i % 2;
    DifferentialForm w = degree == 0 ? DifferentialForm::function(c, r.polynomial(c, 1)) : r.form(c, 1, 1);
    INFO(render(w));
    CHECK(exterior_derivative(exterior_derivative(w)).is_zero());
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("d of d vanishes on four-dimensional forms") {
  Random r(1002);
  Chart c = chart_p4();
  for (int i = 0; i < 40; ++i) {
    DifferentialForm w = r.form(c, 1 + i % 2, 1);
    CHECK(exterior_derivative(exterior_derivative(w)).is_zero());
  }
}

TEST_CASE("wedge is graded antisymmetric and associative") {
  Random r(2001);
  Chart c = chart_p4();
  for (int i = 0; i < 60; ++i) {
    int p = r.uniform(0, 2), q = r.uniform(0, 2), s = r.uniform(0, 1);
    auto a = r.form(c, p, 1), b = r.form(c, q, 1), e = r.form(c, s, 1);
    CHECK(wedge(a, b) == Expr(sign(p, q)) * wedge(b, a));
    CHECK(wedge(wedge(a, b), e) == wedge(a, wedge(b, e)));
    CHECK(wedge(a, b + b) == Expr(2) * wedge(a, b));
  }
}

TEST_CASE("exterior derivative obeys the Leibniz rule") {
  Random r(2002);
  Chart c = chart_p4();
  for (int i = 0; i < 60; ++i) {
    int p = r.uniform(0, 2), q = r.uniform(0, 1);
    auto a = r.form(c, p, 1), b = r.form(c, q, 1);
    auto lhs = exterior_derivative(wedge(a, b));
    auto rhs = wedge(exterior_derivative(a), b) + Expr(p % 2 == 0 ? 1 : -1) * wedge(a, exterior_derivative(b));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("Lie bracket satisfies the Jacobi identity") {
  Random r(3001);
  Chart c = chart_p3();
  for (int i = 0; i < 30; ++i) {
    auto x = r.field(c), y = r.field(c), z = r.field(c);
    auto jac = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) + lie_bracket(z, lie_bracket(x, y));
    CHECK(jac.is_zero());
    CHECK(lie_bracket(x, y) == -lie_bracket(y, x));
  }
}

TEST_CASE("bracket matches the commutator of derivations") {
  Random r(3002);
  Chart c = chart_p3();
  for (int i = 0; i < 30; ++i) {
    auto x = r.field(c), y = r.field(c);
    Expr g = r.polynomial(c, 1);
    CHECK(lie_bracket(x, y).apply(g) == x.apply(y.apply(g)) - y.apply(x.apply(g)));
  }
}

TEST_CASE("pullback is functorial") {
  Random r(4001);
  Chart p = chart_p3(), q = chart_q3(), s = chart_r3();
  Expr d = P("delta");
  for (int i = 0; i < 25; ++i) {
    int a = r.uniform(1, 3), b = r.uniform(-2, 2);
    CoordinateChange phi(p, q, {q.coord(0), q.coord(0) + d * q.coord(1), Expr(a) * q.coord(2) + Expr(b) * q.coord(1) * q.coord(1)});
    CoordinateChange psi(q, s, {s.coord(0) + Expr(b) * s.coord(2), s.coord(1), s.coord(2) + s.coord(0) * s.coord(0)});
    Pde test{"random", p, r.polynomial(p, 2, 4) + r.polynomial(p, 2, 2) * r.polynomial(p, 2, 2), {}};
    Pde two = pullback_pde(pullback_pde(test, phi), psi);
    Pde one = pullback_pde(test, phi.then(psi));
    CHECK(two.expression == one.expression);
  }
}

TEST_CASE("limits commute with reduction on the first Hirota degeneration") {
  // Spectra (0, delta, b, inf) give a = delta - b, b, c = -delta.
  Expr d = P("delta");
  Chart p = chart_p3(), q = chart_q3();
  CoordinateChange change(p, q, {q.coord(0), q.coord(0) + d * q.coord(1), q.coord(2)});

  PdeSystem eq = specialize(pde_catalog("hirota"), {{param("a"), d - P("b")}, {param("b"), P("b")}, {param("c"), -d}});
  Expr moved = pullback_pde(eq.members[0], change).expression;
  int k = -*leading_order(moved, param("delta"));
  Expr limit_eq = limit_after_premultiply(moved, param("delta"), k);

  auto form = pullback_form(hirota_form(Expr(0), d, P("b"), Spectral::infinity()), change);
  PdeSystem from_form = lambda_reduce(integrability_residual(limit_form(form, param("delta"))), spectral_symbol());
  REQUIRE(from_form.members.size() == 1);
  CHECK(equivalent_up_to_factor(from_form.members[0].expression, limit_eq, q).verdict != Verdict::Different);
  CHECK(equivalent_up_to_factor(limit_eq, catalog_pde("eq2").expression, q).verdict == Verdict::Equal);
}

TEST_CASE("total derivatives commute") {
  Random r(5001);
  Chart c = chart_p3();
  for (int n = 0; n < 60; ++n) {
    Expr e = r.expression(c, 2);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j)
        CHECK(total_derivative(total_derivative(e, c, i), c, j) == total_derivative(total_derivative(e, c, j), c, i));
  }
}

TEST_CASE("arithmetic is canonical") {
  Random r(5002);
  Chart c = chart_p3();
  for (int n = 0; n < 60; ++n) {
    Expr x = r.expression(c, 2), y = r.expression(c, 2), z = r.expression(c, 1);
    CHECK(x * y == y * x);
    CHECK((x + (-x)).is_zero());
    CHECK((x + y) * z == x * z + y * z);
    Expr w = Expr(2) + c.coord(0) * P("a") - c.coord(2) * c.coord(2);
    CHECK(x / w * w == x);
    if (!y.is_zero() && !y.involves_jets()) CHECK(x / y * y == x);
  }
}

TEST_CASE("substitution of parameter values commutes with total derivatives") {
  Random r(5003);
  Chart c = chart_p3();
  Bindings b{{param("a"), Expr::rational(-7, 3)}};
  for (int n = 0; n < 40; ++n) {
    Expr e = r.expression(c, 2);
    for (std::size_t i = 0; i < 3; ++i) CHECK(substitute(total_derivative(e, c, i), b) == total_derivative(substitute(e, b), c, i));
  }
}

TEST_CASE("series coefficients reconstruct the expression") {
  Random r(5004);
  Chart c = chart_p3();
  Symbol ds = param("delta");
  Expr d(ds);
  for (int n = 0; n < 30; ++n) {
    Expr e = (r.polynomial(c, 1) + d * r.polynomial(c, 1) + d * d * r.polynomial(c, 1)) / (Expr(1) - d * c.coord(0)) / d;
    int high = 3;
    auto coeff = series_coefficients(e, ds, -1, high);
    Expr sum(0);
    for (int k = -1; k <= high; ++k) sum += coeff[static_cast<std::size_t>(k + 1)] * (k < 0 ? Expr(1) / d.pow(-k) : d.pow(k));
    Expr rest = (e - sum) / d.pow(high + 1);
    // rest stays regular at delta = 0.
    CHECK(leading_order(rest, ds).value_or(0) >= 0);
  }
}
