#pragma once

#include <string>
#include <vector>

#include "vweb/calculus.hpp"
#include "vweb/chart.hpp"
#include "vweb/forms.hpp"

namespace vweb {

struct Pde {
  std::string name;
  Chart chart;
  Expr expression;
  std::vector<Symbol> parameters;

  // Highest derivative order among jets of the chart's unknowns.
  int jet_order() const;
};

struct PdeSystem {
  std::string name;
  Chart chart;
  std::vector<Pde> members;
};

// A point of the spectral line, possibly the point at infinity.
class Spectral {
 public:
  static Spectral infinity() { return Spectral(true, Expr()); }
  static Spectral finite(Expr value) { return Spectral(false, std::move(value)); }
  bool is_infinite() const noexcept { return infinite_; }
  const Expr& value() const;

 private:
  Spectral(bool inf, Expr v) : infinite_(inf), value_(std::move(v)) {}
  bool infinite_;
  Expr value_;
};

// The spectral parameter lambda of every form and distribution.
Symbol spectral_symbol();
inline Symbol param(const std::string& name) { return Symbol::parameter(name); }
inline Expr P(const std::string& name) { return Expr(Symbol::parameter(name)); }

// Standard charts; jets are positional so equal-dimension charts share jets.
Chart chart_p3(std::vector<std::string> unknowns = {"f"});
Chart chart_q3(std::vector<std::string> unknowns = {"f"});
Chart chart_r3(std::vector<std::string> unknowns = {"f"});
Chart chart_p4(std::vector<std::string> unknowns = {"f"});
Chart chart_q4(std::vector<std::string> unknowns = {"f"});
// p-chart carrying the univariate spectral functions lambda_i(p_i).
Chart chart_family_a();
// Hyper-Hermitian charts (x1,x2,y1,y2) and (x1,x2,z1,z2).
Chart chart_xy(std::vector<std::string> unknowns = {"f1", "f2"});
Chart chart_xz(std::vector<std::string> unknowns = {"f1", "f2"});

DifferentialForm hirota_form(const Expr& l1, const Expr& l2, const Expr& l3, const Spectral& l4,
                             const Chart& chart = chart_p3());
// Hirota form with lambda_i the univariate jets of chart_family_a().
DifferentialForm family_a_form();
DifferentialForm family_d_form(const Expr& a, const Expr& b, const Expr& c);
// As printed: +b(lambda-c) g1 dp2. Its lambda-coefficients are not proportional.
DifferentialForm family_d_form_printed(const Expr& a, const Expr& b, const Expr& c);
DifferentialForm veronese4_form(const std::vector<Expr>& l, const Spectral& l4, const Chart& chart = chart_p4());
// Limit form on the q-chart, including the constant -f_3 dq_0 term.
DifferentialForm veronese4_c_form();
// The same form as printed, without that term.
DifferentialForm veronese4_c_form_printed();
std::vector<VectorField> veronese4_distribution();

// Binds parameters in every member.
PdeSystem specialize(const PdeSystem& s, const Bindings& b);

std::vector<std::string> catalog_ids();
PdeSystem pde_catalog(const std::string& id);
// Single-equation entries; throws for multi-member systems.
Pde catalog_pde(const std::string& id);

}  // namespace vweb
