#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vweb/case_report.hpp"
#include "vweb/models.hpp"

namespace vweb {

// p = forward(q): every source coordinate written in target coordinates and parameters.
class CoordinateChange {
 public:
  CoordinateChange(Chart source, Chart target, std::vector<Expr> forward);
  // Same chart, old_i = factor_i * new_i.
  static CoordinateChange rescaling(const Chart& chart, const std::vector<Expr>& factors);
  static CoordinateChange identity(const Chart& chart);

  const Chart& source() const noexcept { return source_; }
  const Chart& target() const noexcept { return target_; }
  const std::vector<Expr>& forward() const noexcept { return forward_; }
  // J[i][j] = d p_i / d q_j
  const std::vector<std::vector<Expr>>& jacobian() const noexcept { return jac_; }
  // M[j][i] = d q_j / d p_i
  const std::vector<std::vector<Expr>>& inverse_jacobian() const noexcept { return inv_; }

  // p = this(q), q = next(r)  ->  p = composite(r)
  CoordinateChange then(const CoordinateChange& next) const;

 private:
  Chart source_, target_;
  std::vector<Expr> forward_;
  std::vector<std::vector<Expr>> jac_, inv_;
};

// Rewrites coordinates and jets of the source chart's functions through the chain rule.
Expr pullback(const Expr& e, const CoordinateChange& change);
Pde pullback_pde(const Pde& p, const CoordinateChange& change);
PdeSystem pullback_system(const PdeSystem& s, const CoordinateChange& change);
DifferentialForm pullback_form(const DifferentialForm& w, const CoordinateChange& change);

// old = base + scale * new
struct UnknownRedefinition {
  std::string old_name;
  std::string new_name;
  Expr base;
  Expr scale = Expr(1);
};

Expr apply_redefinition(const Expr& e, const Chart& chart, const UnknownRedefinition& r);
Chart redefined_chart(const Chart& chart, const UnknownRedefinition& r);
Pde apply_redefinition(const Pde& p, const UnknownRedefinition& r);
PdeSystem apply_redefinition(const PdeSystem& s, const UnknownRedefinition& r);

// Lowest-order part of every coefficient at the common leading power of param.
DifferentialForm limit_form(const DifferentialForm& w, const Symbol& param);

namespace step {
struct Bind {
  Bindings bindings;
};
struct Change {
  CoordinateChange change;
};
struct Redefine {
  UnknownRedefinition redefinition;
};
struct Recombine {
  std::vector<std::vector<long>> rows;  // coefficients over current members
  std::vector<std::string> labels;
};
struct Limit {
  Symbol param;
  std::vector<int> k;  // per member
  std::vector<std::optional<int>> printed_k;
};
// Form source only: lambda_reduce of the integrability residual.
struct Reduce {};
struct Compare {
  std::string target;
  Bindings specialization;
  bool required = true;
  std::string note;
};
}  // namespace step

using Step = std::variant<step::Bind, step::Change, step::Redefine, step::Recombine, step::Limit, step::Reduce, step::Compare>;

struct LimitRecipe {
  std::string id;
  std::string summary;
  std::variant<PdeSystem, DifferentialForm> source;
  std::vector<Step> steps;
  std::vector<std::string> notes;
};

// Executes the steps; errors inside the recipe become an error status, not exceptions.
CaseReport run_recipe(const LimitRecipe& recipe);
std::vector<LimitRecipe> builtin_recipes();
LimitRecipe builtin_recipe(const std::string& id);

}  // namespace vweb
