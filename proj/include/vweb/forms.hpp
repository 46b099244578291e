#pragma once

#include <map>
#include <string>
#include <vector>

#include "vweb/chart.hpp"
#include "vweb/expr.hpp"

namespace vweb {

// Sparse form: strictly increasing index tuples to nonzero coefficients.
class DifferentialForm {
 public:
  using Key = std::vector<int>;

  DifferentialForm(Chart chart, int degree);
  static DifferentialForm function(Chart chart, const Expr& f);
  static DifferentialForm basis(Chart chart, Key key);
  // Sum of coefficient_i dp_i.
  static DifferentialForm one_form(Chart chart, const std::vector<Expr>& coefficients);

  const Chart& chart() const noexcept { return chart_; }
  int degree() const noexcept { return degree_; }
  const std::map<Key, Expr>& coefficients() const noexcept { return coeffs_; }
  Expr coefficient(const Key& key) const;
  bool is_zero() const noexcept { return coeffs_.empty(); }

  // Adds c to the coefficient of an arbitrary (unsorted) index tuple.
  void add(Key key, const Expr& c);

  DifferentialForm operator-() const;
  friend DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b);
  friend DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b);
  friend DifferentialForm operator*(const Expr& c, const DifferentialForm& w);
  friend bool operator==(const DifferentialForm& a, const DifferentialForm& b);

  // Coefficient-wise map (no chain rule).
  template <class F>
  DifferentialForm map_coefficients(F&& f) const {
    DifferentialForm out(chart_, degree_);
    for (const auto& [k, c] : coeffs_) out.add(k, f(c));
    return out;
  }

 private:
  Chart chart_;
  int degree_;
  std::map<Key, Expr> coeffs_;
};

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm exterior_derivative(const DifferentialForm& w);
std::string render(const DifferentialForm& w);

class VectorField {
 public:
  VectorField(Chart chart, std::vector<Expr> components);
  static VectorField coordinate_field(Chart chart, std::size_t i);

  const Chart& chart() const noexcept { return chart_; }
  const std::vector<Expr>& components() const noexcept { return comps_; }
  const Expr& component(std::size_t i) const { return comps_.at(i); }
  bool is_zero() const;

  // X(e) = sum X^i D_i e.
  Expr apply(const Expr& e) const;

  VectorField operator-() const;
  friend VectorField operator+(const VectorField& a, const VectorField& b);
  friend VectorField operator-(const VectorField& a, const VectorField& b);
  friend VectorField operator*(const Expr& c, const VectorField& x);
  friend bool operator==(const VectorField& a, const VectorField& b);

 private:
  Chart chart_;
  std::vector<Expr> comps_;
};

VectorField lie_bracket(const VectorField& x, const VectorField& y);
std::string render(const VectorField& x);

}  // namespace vweb
