#include "vweb/forms.hpp"

#include <algorithm>

#include "vweb/calculus.hpp"
#include "vweb/errors.hpp"

namespace vweb {

namespace {

void same_chart(const Chart& a, const Chart& b) {
  if (!(a == b)) fail(ErrorKind::ChartMismatch, "operands live on different charts");
}

// Sorts key in place; returns the permutation sign, or 0 on a repeated index.
int sort_with_sign(std::vector<int>& key) {
  int sign = 1;
  for (std::size_t i = 1; i < key.size(); ++i)
    for (std::size_t j = i; j > 0 && key[j - 1] >= key[j]; --j) {
      if (key[j - 1] == key[j]) return 0;
      std::swap(key[j - 1], key[j]);
      sign = -sign;
    }
  return sign;
}

}  // namespace

DifferentialForm::DifferentialForm(Chart chart, int degree) : chart_(std::move(chart)), degree_(degree) {
  if (degree < 0) fail(ErrorKind::InvalidArgument, "negative form degree");
}

DifferentialForm DifferentialForm::function(Chart chart, const Expr& f) {
  DifferentialForm w(std::move(chart), 0);
  w.add({}, f);
  return w;
}

DifferentialForm DifferentialForm::basis(Chart chart, Key key) {
  DifferentialForm w(std::move(chart), static_cast<int>(key.size()));
  w.add(std::move(key), Expr(1));
  return w;
}

DifferentialForm DifferentialForm::one_form(Chart chart, const std::vector<Expr>& coefficients) {
  if (coefficients.size() != chart.dimension()) fail(ErrorKind::ChartMismatch, "one coefficient per coordinate expected");
  DifferentialForm w(std::move(chart), 1);
  for (std::size_t i = 0; i < coefficients.size(); ++i) w.add({static_cast<int>(i)}, coefficients[i]);
  return w;
}

Expr DifferentialForm::coefficient(const Key& key) const {
  Key k = key;
  int s = sort_with_sign(k);
  if (s == 0) return Expr();
  auto it = coeffs_.find(k);
  if (it == coeffs_.end()) return Expr();
  return s > 0 ? it->second : -it->second;
}

void DifferentialForm::add(Key key, const Expr& c) {
  if (static_cast<int>(key.size()) != degree_) fail(ErrorKind::InvalidArgument, "index tuple length differs from degree");
  for (int i : key)
    if (i < 0 || i >= static_cast<int>(chart_.dimension())) fail(ErrorKind::ChartMismatch, "index outside the chart");
  if (c.is_zero()) return;
  int s = sort_with_sign(key);
  if (s == 0) return;
  auto [it, inserted] = coeffs_.try_emplace(key, s > 0 ? c : -c);
  if (!inserted) {
    it->second += s > 0 ? c : -c;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

DifferentialForm DifferentialForm::operator-() const {
  DifferentialForm w = *this;
  for (auto& [k, c] : w.coeffs_) c = -c;
  return w;
}

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b) {
  same_chart(a.chart_, b.chart_);
  if (a.degree_ != b.degree_) fail(ErrorKind::InvalidArgument, "sum of forms of different degree");
  DifferentialForm w = a;
  for (const auto& [k, c] : b.coeffs_) w.add(k, c);
  return w;
}

DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b) { return a + (-b); }

DifferentialForm operator*(const Expr& c, const DifferentialForm& w) {
  DifferentialForm out(w.chart_, w.degree_);
  if (c.is_zero()) return out;
  for (const auto& [k, v] : w.coeffs_) out.add(k, c * v);
  return out;
}

bool operator==(const DifferentialForm& a, const DifferentialForm& b) {
  return a.chart_ == b.chart_ && a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
  same_chart(a.chart(), b.chart());
  DifferentialForm out(a.chart(), a.degree() + b.degree());
  if (out.degree() > static_cast<int>(a.chart().dimension())) return out;
  for (const auto& [ka, ca] : a.coefficients())
    for (const auto& [kb, cb] : b.coefficients()) {
      DifferentialForm::Key k = ka;
      k.insert(k.end(), kb.begin(), kb.end());
      out.add(std::move(k), ca * cb);
    }
  return out;
}

DifferentialForm exterior_derivative(const DifferentialForm& w) {
  const Chart& chart = w.chart();
  if (w.degree() >= static_cast<int>(chart.dimension()))
    fail(ErrorKind::InvalidArgument, "exterior derivative of a top-degree form");
  DifferentialForm out(chart, w.degree() + 1);
  for (const auto& [k, c] : w.coefficients())
    for (std::size_t i = 0; i < chart.dimension(); ++i) {
      if (std::find(k.begin(), k.end(), static_cast<int>(i)) != k.end()) continue;
      DifferentialForm::Key key{static_cast<int>(i)};
      key.insert(key.end(), k.begin(), k.end());
      out.add(std::move(key), total_derivative(c, chart, i));
    }
  return out;
}

std::string render(const DifferentialForm& w) {
  if (w.is_zero()) return "0";
  std::string out;
  for (const auto& [k, c] : w.coefficients()) {
    if (!out.empty()) out += " + ";
    out += "(" + render(c, &w.chart()) + ")";
    for (std::size_t j = 0; j < k.size(); ++j)
      out += (j ? "^d" : " d") + w.chart().coordinate(static_cast<std::size_t>(k[j])).name();
  }
  return out;
}

// ---- vector fields ---------------------------------------------------------

VectorField::VectorField(Chart chart, std::vector<Expr> components) : chart_(std::move(chart)), comps_(std::move(components)) {
  if (comps_.size() != chart_.dimension()) fail(ErrorKind::ChartMismatch, "component count differs from chart dimension");
}

VectorField VectorField::coordinate_field(Chart chart, std::size_t i) {
  std::vector<Expr> c(chart.dimension());
  c.at(i) = Expr(1);
  return VectorField(std::move(chart), std::move(c));
}

bool VectorField::is_zero() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const Expr& e) { return e.is_zero(); });
}

Expr VectorField::apply(const Expr& e) const {
  Expr out;
  for (std::size_t i = 0; i < comps_.size(); ++i)
    if (!comps_[i].is_zero()) out += comps_[i] * total_derivative(e, chart_, i);
  return out;
}

VectorField VectorField::operator-() const {
  VectorField x = *this;
  for (auto& c : x.comps_) c = -c;
  return x;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  same_chart(a.chart_, b.chart_);
  VectorField x = a;
  for (std::size_t i = 0; i < x.comps_.size(); ++i) x.comps_[i] += b.comps_[i];
  return x;
}

VectorField operator-(const VectorField& a, const VectorField& b) { return a + (-b); }

VectorField operator*(const Expr& c, const VectorField& x) {
  VectorField y = x;
  for (auto& v : y.comps_) v = c * v;
  return y;
}

bool operator==(const VectorField& a, const VectorField& b) { return a.chart_ == b.chart_ && a.comps_ == b.comps_; }

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  same_chart(x.chart(), y.chart());
  std::vector<Expr> c(x.chart().dimension());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = x.apply(y.component(k)) - y.apply(x.component(k));
  return VectorField(x.chart(), std::move(c));
}

std::string render(const VectorField& x) {
  std::string out;
  for (std::size_t i = 0; i < x.components().size(); ++i) {
    if (x.component(i).is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + render(x.component(i), &x.chart()) + ") d/d" + x.chart().coordinate(i).name();
  }
  return out.empty() ? "0" : out;
}

}  // namespace vweb
