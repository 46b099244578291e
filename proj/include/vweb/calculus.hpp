#pragma once

#include <map>
#include <optional>
#include <vector>

#include "vweb/chart.hpp"
#include "vweb/expr.hpp"

namespace vweb {

using Bindings = std::map<Symbol, Expr>;

// D_i on the jet space of the chart: prolongs jets, applies the chain rule
// to exp atoms; coordinates outside the chart are constants.
Expr total_derivative(const Expr& e, const Chart& chart, std::size_t i);
// D^m for a multi-index m.
Expr total_derivative(const Expr& e, const Chart& chart, const MultiIndex& m);

// Partial derivative in one symbol, every other symbol independent.
Expr partial_derivative(const Expr& e, const Symbol& s);

// Simultaneous substitution followed by one normalization.
Expr substitute(const Expr& e, const Bindings& bindings);

// Powers of x in the numerator; the denominator must not mention x.
std::map<int, Expr> collect(const Expr& e, const Symbol& x);

// Laurent coefficients of e in param for exponents low..high.
std::vector<Expr> series_coefficients(const Expr& e, const Symbol& param, int low, int high);
// Lowest power of param present in e; nullopt for e = 0.
std::optional<int> leading_order(const Expr& e, const Symbol& param);
// Coefficient of param^0 in param^k * e; PoleRemains when a negative power survives.
Expr limit_after_premultiply(const Expr& e, const Symbol& param, int k);

}  // namespace vweb
