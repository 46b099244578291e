#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vweb/models.hpp"

namespace vweb {

// ---- closed forms ----------------------------------------------------------

struct NumNode;
using NumExpr = std::shared_ptr<const NumNode>;

struct NumNode {
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp };
  Op op = Op::Const;
  double value = 0;
  std::optional<Scalar> exact;  // Const written as an integer or fraction
  std::string name;             // Var
  int exponent = 0;             // Pow
  NumExpr a, b;
};

NumExpr num_const(double v, std::optional<Scalar> exact = std::nullopt);
NumExpr num_var(const std::string& name);
NumExpr num_unary(NumNode::Op op, NumExpr a);
NumExpr num_binary(NumNode::Op op, NumExpr a, NumExpr b);
NumExpr num_pow(NumExpr a, int e);

bool is_transcendental(const NumExpr& e);  // contains sin or cos
std::set<std::string> variables(const NumExpr& e);
std::string render(const NumExpr& e);

struct ClosedFormSolution {
  std::string unknown;
  NumExpr expression;
  std::map<std::string, double> parameters;
};

// Chart position of a closed-form variable: exact coordinate name, else matching label.
std::optional<std::size_t> resolve_coordinate(const std::string& name, const Chart& chart);

// Exact symbolic image on the chart when the closed form stays in the exp-rational fragment.
std::optional<Expr> to_symbolic(const NumExpr& e, const Chart& chart);

// Value, gradient and Hessian in up to four variables.
struct Jet2 {
  static constexpr int N = 4;
  double v = 0;
  double g[N] = {0, 0, 0, 0};
  double h[N][N] = {};
};

// Flat program evaluated on a chart point.
class CompiledForm {
 public:
  CompiledForm(const NumExpr& e, const Chart& chart, const std::map<std::string, double>& params);
  double value(const std::vector<double>& x) const;
  Jet2 jet2(const std::vector<double>& x) const;
  // First partial derivative along chart position i.
  double derivative(const std::vector<double>& x, std::size_t i) const;

 private:
  struct Instr {
    NumNode::Op op;
    double c;
    int slot;  // variable slot or exponent
  };
  std::vector<Instr> code_;
  std::size_t dim_;
  template <class T>
  T run(const std::vector<T>& vars) const;
};

// ---- grids -----------------------------------------------------------------

struct Axis {
  double origin = 0;
  double spacing = 1;
  std::size_t count = 5;
  double at(std::size_t i) const { return origin + spacing * static_cast<double>(i); }
  bool operator==(const Axis& o) const { return origin == o.origin && spacing == o.spacing && count == o.count; }
};

// Axes spanning [a, b] with spacing h in every direction.
std::vector<Axis> box_axes(std::size_t dim, double a, double b, double h);

class Grid {
 public:
  Grid(std::vector<Axis> axes, std::string unknown, std::vector<double> values);
  static Grid sample(std::vector<Axis> axes, std::string unknown, const std::function<double(const std::vector<double>&)>& f);

  std::size_t dimension() const noexcept { return axes_.size(); }
  const std::vector<Axis>& axes() const noexcept { return axes_; }
  const std::string& unknown() const noexcept { return unknown_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& mutable_values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t flat(const std::vector<std::size_t>& idx) const;
  std::vector<std::size_t> unflat(std::size_t k) const;
  std::vector<double> point(const std::vector<std::size_t>& idx) const;
  double at(const std::vector<std::size_t>& idx) const { return values_[flat(idx)]; }
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }

  std::string to_json() const;
  static Grid from_json(const std::string& text);

 private:
  std::vector<Axis> axes_;
  std::string unknown_;
  std::vector<double> values_;
  std::vector<std::size_t> strides_;
};

// Central differences; multi of order <= 2. NaN samples propagate.
double fd_jet(const Grid& grid, const std::vector<std::size_t>& node, const MultiIndex& multi);

// ---- residuals -------------------------------------------------------------

struct ClosedFormResidual {
  std::optional<Expr> symbolic;
  double max_abs = 0;
  std::size_t samples = 0;
};

// Sample box [a,b]^dim with n points per axis.
ClosedFormResidual residual_closed_form(const Pde& p, const std::vector<ClosedFormSolution>& solutions,
                                        const std::map<std::string, double>& params = {}, double a = -1, double b = 1,
                                        std::size_t n = 17);

struct GridResidual {
  double max_abs = 0;
  double l2 = 0;  // root mean square over counted nodes
  std::size_t interior = 0;
  std::size_t skipped = 0;  // nodes whose stencil touches missing samples
};

GridResidual residual_grid(const Pde& p, const std::vector<const Grid*>& grids, const std::map<std::string, double>& params = {});
GridResidual residual_grid(const Pde& p, const Grid& grid, const std::map<std::string, double>& params = {});

// ---- Bäcklund correspondences ----------------------------------------------

// First derivatives of H at arbitrary points of the box.
class HField {
 public:
  virtual ~HField() = default;
  virtual double derivative(const std::vector<double>& x, std::size_t i) const = 0;
};

class ClosedFormField : public HField {
 public:
  ClosedFormField(const ClosedFormSolution& s, const Chart& chart);
  double derivative(const std::vector<double>& x, std::size_t i) const override;

 private:
  CompiledForm form_;
};

// Finite-difference first derivatives of a grid, interpolated with 4-point Lagrange per axis.
class GridField : public HField {
 public:
  explicit GridField(const Grid& h);
  double derivative(const std::vector<double>& x, std::size_t i) const override;

 private:
  std::vector<Grid> d_;
};

struct BacklundResult {
  Grid output;
  std::size_t missing = 0;  // nodes left without a value (escaped characteristics, missing input)
  std::vector<GridResidual> residuals;  // one per member of the target system
  double max_residual = 0;
  double closedness_defect = 0;  // f -> H only
  std::optional<double> premise_residual;
};

// f from H through f_a + H_{a+1} f_last = 0; initial data on the last axis.
BacklundResult backlund_h_to_f(const HField& h, const std::vector<Axis>& axes, const std::function<double(double)>& initial);
// H from f: H_{a+1} = -f_a / f_last, trapezoid path integration with gauge H = 0 on the base line.
BacklundResult backlund_f_to_h(const Grid& f);

// Equation the constructed unknown must satisfy, by dimension.
PdeSystem backlund_target(std::size_t dim, bool constructs_f);

double observed_order(double coarse, double fine);

}  // namespace vweb
