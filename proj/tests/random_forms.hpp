// Seeded generators of random expressions, forms and vector fields for property checks.
#pragma once

#include <random>

#include "vweb/calculus.hpp"
#include "vweb/forms.hpp"
#include "vweb/models.hpp"

namespace vweb::testing {

class Random {
 public:
  explicit Random(unsigned seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  MultiIndex multi(std::size_t dim, int max_order) {
    MultiIndex m(dim, 0);
    int order = uniform(0, max_order);
    for (int i = 0; i < order; ++i) ++m[static_cast<std::size_t>(uniform(0, static_cast<int>(dim) - 1))];
    return m;
  }

  // Polynomial in coordinates, one parameter and jets of f up to max_jet.
  Expr polynomial(const Chart& c, int max_jet, int terms = 3) {
    Expr out(0);
    for (int t = 0; t < terms; ++t) {
      Expr term = Expr::rational(uniform(-5, 5), uniform(1, 3));
      int factors = uniform(0, 3);
      for (int k = 0; k < factors; ++k) {
        switch (uniform(0, 2)) {
          case 0: term *= c.coord(static_cast<std::size_t>(uniform(0, static_cast<int>(c.dimension()) - 1))); break;
          case 1: term *= P("a"); break;
          default: term *= c.jet(c.unknowns().front(), multi(c.dimension(), max_jet)); break;
        }
      }
      out += term;
    }
    return out;
  }

  // Adds a jet-free denominator or an exponential atom now and then.
  Expr expression(const Chart& c, int max_jet) {
    Expr e = polynomial(c, max_jet);
    int kind = uniform(0, 3);
    if (kind == 1) e /= Expr(1) + c.coord(0) * c.coord(0) + P("a") * c.coord(1);
    if (kind == 2) e *= Expr::exp(Expr(uniform(1, 3)) * c.coord(2) - c.coord(0));
    return e;
  }

  DifferentialForm form(const Chart& c, int degree, int max_jet) {
    DifferentialForm w(c, degree);
    int n = static_cast<int>(c.dimension());
    int terms = uniform(1, 3);
    for (int t = 0; t < terms; ++t) {
      DifferentialForm::Key key;
      for (int k = 0; k < degree; ++k) key.push_back(uniform(0, n - 1));
      w.add(key, polynomial(c, max_jet, 2));
    }
    return w;
  }

  VectorField field(const Chart& c) {
    std::vector<Expr> comps;
    for (std::size_t i = 0; i < c.dimension(); ++i) comps.push_back(polynomial(c, 1, 2));
    return VectorField(c, comps);
  }

 private:
  std::mt19937 rng_;
};

}  // namespace vweb::testing
