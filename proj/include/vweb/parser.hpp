#pragma once

#include <string>
#include <vector>

#include "vweb/chart.hpp"
#include "vweb/numeric.hpp"

namespace vweb {

// Closed form for numeric work: coordinates, parameters, + - * / ^, exp, sin, cos.
NumExpr parse_numeric(const std::string& src);

// Exact expression on a chart. Identifiers resolve to coordinates, jets of the
// chart's functions (f, f_23, H_{x1z2}) or otherwise parameters. Decimal
// literals and sin/cos are rejected.
Expr parse_symbolic(const std::string& src, const Chart& chart, std::vector<std::string>* parameters = nullptr);

}  // namespace vweb
