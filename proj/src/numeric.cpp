#include "vweb/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "vweb/errors.hpp"

namespace vweb {

// ---- NumExpr ---------------------------------------------------------------

NumExpr num_const(double v, std::optional<Scalar> exact) {
  auto n = std::make_shared<NumNode>();
  n->op = NumNode::Op::Const;
  n->value = v;
  n->exact = std::move(exact);
  return n;
}

NumExpr num_var(const std::string& name) {
  auto n = std::make_shared<NumNode>();
  n->op = NumNode::Op::Var;
  n->name = name;
  return n;
}

NumExpr num_unary(NumNode::Op op, NumExpr a) {
  auto n = std::make_shared<NumNode>();
  n->op = op;
  n->a = std::move(a);
  return n;
}

NumExpr num_binary(NumNode::Op op, NumExpr a, NumExpr b) {
  auto n = std::make_shared<NumNode>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NumExpr num_pow(NumExpr a, int e) {
  if (e < 0) fail(ErrorKind::InvalidArgument, "negative exponent");
  auto n = std::make_shared<NumNode>();
  n->op = NumNode::Op::Pow;
  n->a = std::move(a);
  n->exponent = e;
  return n;
}

bool is_transcendental(const NumExpr& e) {
  if (!e) return false;
  if (e->op == NumNode::Op::Sin || e->op == NumNode::Op::Cos) return true;
  return is_transcendental(e->a) || is_transcendental(e->b);
}

namespace {

void collect_variables(const NumExpr& e, std::set<std::string>& out) {
  if (!e) return;
  if (e->op == NumNode::Op::Var) out.insert(e->name);
  collect_variables(e->a, out);
  collect_variables(e->b, out);
}

int precedence(NumNode::Op op) {
  using O = NumNode::Op;
  switch (op) {
    case O::Add:
    case O::Sub: return 1;
    case O::Mul:
    case O::Div: return 2;
    case O::Neg: return 3;
    case O::Pow: return 4;
    default: return 5;
  }
}

std::string const_text(const NumNode& n) {
  if (n.exact) return n.exact->get_str();
  std::ostringstream os;
  os.precision(17);
  os << n.value;
  std::string s = os.str();
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

std::set<std::string> variables(const NumExpr& e) {
  std::set<std::string> out;
  collect_variables(e, out);
  return out;
}

std::string render(const NumExpr& e) {
  using O = NumNode::Op;
  auto wrap = [](const NumExpr& c, int min_prec) {
    std::string s = render(c);
    int p = precedence(c->op);
    if (c->op == O::Const && (s[0] == '-' || s.find('/') != std::string::npos)) p = 2;
    return p < min_prec ? "(" + s + ")" : s;
  };
  switch (e->op) {
    case O::Const: return const_text(*e);
    case O::Var: return e->name;
    case O::Add: return wrap(e->a, 1) + " + " + wrap(e->b, 1);
    case O::Sub: return wrap(e->a, 1) + " - " + wrap(e->b, 2);
    case O::Mul: return wrap(e->a, 2) + "*" + wrap(e->b, 3);
    case O::Div: return wrap(e->a, 2) + "/" + wrap(e->b, 3);
    case O::Neg: return "-" + wrap(e->a, 3);
    case O::Pow: return wrap(e->a, 5) + "^" + std::to_string(e->exponent);
    case O::Sin: return "sin(" + render(e->a) + ")";
    case O::Cos: return "cos(" + render(e->a) + ")";
    case O::Exp: return "exp(" + render(e->a) + ")";
  }
  return "";
}

std::optional<std::size_t> resolve_coordinate(const std::string& name, const Chart& chart) {
  for (std::size_t i = 0; i < chart.dimension(); ++i)
    if (chart.coordinate(i).name() == name) return i;
  std::string l = default_label(name);
  if (l == name) return std::nullopt;
  for (std::size_t i = 0; i < chart.dimension(); ++i)
    if (chart.label(i) == l) return i;
  return std::nullopt;
}

std::optional<Expr> to_symbolic(const NumExpr& e, const Chart& chart) {
  using O = NumNode::Op;
  auto sub = [&](const NumExpr& c) { return to_symbolic(c, chart); };
  switch (e->op) {
    case O::Const:
      if (!e->exact) return std::nullopt;
      return Expr(*e->exact);
    case O::Var:
      if (auto i = resolve_coordinate(e->name, chart)) return chart.coord(*i);
      return P(e->name);
    case O::Sin:
    case O::Cos: return std::nullopt;
    case O::Neg:
    case O::Exp:
    case O::Pow: {
      auto a = sub(e->a);
      if (!a) return std::nullopt;
      if (e->op == O::Neg) return -*a;
      if (e->op == O::Exp) return Expr::exp(*a);
      return a->pow(e->exponent);
    }
    default: {
      auto a = sub(e->a), b = sub(e->b);
      if (!a || !b) return std::nullopt;
      if (e->op == O::Add) return *a + *b;
      if (e->op == O::Sub) return *a - *b;
      if (e->op == O::Mul) return *a * *b;
      try {
        return *a / *b;
      } catch (const Error& err) {
        if (err.kind() == ErrorKind::ZeroDenominator) fail(ErrorKind::EvaluationDomain, "closed form divides by zero");
        throw;
      }
    }
  }
}

// ---- forward-mode arithmetic -----------------------------------------------

namespace {

struct Dual {
  double v = 0, d = 0;
};

template <class T>
T constant(double c);
template <>
double constant<double>(double c) { return c; }
template <>
Dual constant<Dual>(double c) { return {c, 0}; }
template <>
Jet2 constant<Jet2>(double c) {
  Jet2 r;
  r.v = c;
  return r;
}

// f(a) given f, f', f''
double chain(double, double f0, double, double) { return f0; }
Dual chain(const Dual& a, double f0, double f1, double) { return {f0, f1 * a.d}; }
Jet2 chain(const Jet2& a, double f0, double f1, double f2) {
  Jet2 r;
  r.v = f0;
  for (int i = 0; i < Jet2::N; ++i) {
    r.g[i] = f1 * a.g[i];
    for (int j = 0; j < Jet2::N; ++j) r.h[i][j] = f1 * a.h[i][j] + f2 * a.g[i] * a.g[j];
  }
  return r;
}

double value_of(double a) { return a; }
double value_of(const Dual& a) { return a.v; }
double value_of(const Jet2& a) { return a.v; }

double add(double a, double b) { return a + b; }
Dual add(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
Jet2 add(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.v = a.v + b.v;
  for (int i = 0; i < Jet2::N; ++i) {
    r.g[i] = a.g[i] + b.g[i];
    for (int j = 0; j < Jet2::N; ++j) r.h[i][j] = a.h[i][j] + b.h[i][j];
  }
  return r;
}

double scale(double a, double c) { return a * c; }
Dual scale(const Dual& a, double c) { return {a.v * c, a.d * c}; }
Jet2 scale(const Jet2& a, double c) {
  Jet2 r;
  r.v = a.v * c;
  for (int i = 0; i < Jet2::N; ++i) {
    r.g[i] = a.g[i] * c;
    for (int j = 0; j < Jet2::N; ++j) r.h[i][j] = a.h[i][j] * c;
  }
  return r;
}

double mul(double a, double b) { return a * b; }
Dual mul(const Dual& a, const Dual& b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
Jet2 mul(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.v = a.v * b.v;
  for (int i = 0; i < Jet2::N; ++i) {
    r.g[i] = a.v * b.g[i] + a.g[i] * b.v;
    for (int j = 0; j < Jet2::N; ++j)
      r.h[i][j] = a.v * b.h[i][j] + b.v * a.h[i][j] + a.g[i] * b.g[j] + b.g[i] * a.g[j];
  }
  return r;
}

template <class T>
T reciprocal(const T& a) {
  double x = value_of(a);
  return chain(a, 1 / x, -1 / (x * x), 2 / (x * x * x));
}

template <class T>
T power(const T& a, int e) {
  if (e == 0) return constant<T>(1);
  double x = value_of(a);
  double f2 = e >= 2 ? e * (e - 1) * std::pow(x, e - 2) : 0.0;
  return chain(a, std::pow(x, e), e * std::pow(x, e - 1), f2);
}

}  // namespace

// ---- CompiledForm ----------------------------------------------------------

CompiledForm::CompiledForm(const NumExpr& e, const Chart& chart, const std::map<std::string, double>& params)
    : dim_(chart.dimension()) {
  if (dim_ > static_cast<std::size_t>(Jet2::N)) fail(ErrorKind::InvalidArgument, "closed forms support at most four variables");
  std::function<void(const NumExpr&)> emit = [&](const NumExpr& n) {
    using O = NumNode::Op;
    switch (n->op) {
      case O::Const: code_.push_back({O::Const, n->value, 0}); return;
      case O::Var: {
        if (auto i = resolve_coordinate(n->name, chart)) {
          code_.push_back({O::Var, 0, static_cast<int>(*i)});
          return;
        }
        auto it = params.find(n->name);
        if (it == params.end()) fail(ErrorKind::UnknownIdentifier, "unbound identifier '" + n->name + "'");
        code_.push_back({O::Const, it->second, 0});
        return;
      }
      case O::Pow:
        emit(n->a);
        code_.push_back({O::Pow, 0, n->exponent});
        return;
      default:
        emit(n->a);
        if (n->b) emit(n->b);
        code_.push_back({n->op, 0, 0});
    }
  };
  emit(e);
}

template <class T>
T CompiledForm::run(const std::vector<T>& vars) const {
  using O = NumNode::Op;
  std::vector<T> st;
  st.reserve(code_.size());
  for (const auto& ins : code_) {
    switch (ins.op) {
      case O::Const: st.push_back(constant<T>(ins.c)); break;
      case O::Var: st.push_back(vars[static_cast<std::size_t>(ins.slot)]); break;
      case O::Neg: st.back() = scale(st.back(), -1); break;
      case O::Pow: st.back() = power(st.back(), ins.slot); break;
      case O::Sin: {
        double x = value_of(st.back());
        st.back() = chain(st.back(), std::sin(x), std::cos(x), -std::sin(x));
        break;
      }
      case O::Cos: {
        double x = value_of(st.back());
        st.back() = chain(st.back(), std::cos(x), -std::sin(x), -std::cos(x));
        break;
      }
      case O::Exp: {
        double ex = std::exp(value_of(st.back()));
        st.back() = chain(st.back(), ex, ex, ex);
        break;
      }
      default: {
        T b = st.back();
        st.pop_back();
        T& a = st.back();
        if (ins.op == O::Add) a = add(a, b);
        else if (ins.op == O::Sub) a = add(a, scale(b, -1));
        else if (ins.op == O::Mul) a = mul(a, b);
        else a = mul(a, reciprocal(b));
      }
    }
  }
  return st.back();
}

double CompiledForm::value(const std::vector<double>& x) const {
  if (x.size() != dim_) fail(ErrorKind::ShapeMismatch, "point dimension differs from the chart");
  return run(x);
}

Jet2 CompiledForm::jet2(const std::vector<double>& x) const {
  if (x.size() != dim_) fail(ErrorKind::ShapeMismatch, "point dimension differs from the chart");
  std::vector<Jet2> v(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    v[i].v = x[i];
    v[i].g[i] = 1;
  }
  return run(v);
}

double CompiledForm::derivative(const std::vector<double>& x, std::size_t i) const {
  if (x.size() != dim_ || i >= dim_) fail(ErrorKind::ShapeMismatch, "point dimension differs from the chart");
  std::vector<Dual> v(dim_);
  for (std::size_t k = 0; k < dim_; ++k) v[k] = {x[k], k == i ? 1.0 : 0.0};
  return run(v).d;
}

// ---- grids -----------------------------------------------------------------

std::vector<Axis> box_axes(std::size_t dim, double a, double b, double h) {
  if (!(h > 0) || !(b > a)) fail(ErrorKind::InvalidArgument, "box needs a < b and h > 0");
  double cells = (b - a) / h;
  auto n = static_cast<std::size_t>(std::llround(cells));
  if (std::abs(cells - static_cast<double>(n)) > 1e-9 * cells) fail(ErrorKind::InvalidArgument, "spacing does not divide the box");
  return std::vector<Axis>(dim, Axis{a, h, n + 1});
}

Grid::Grid(std::vector<Axis> axes, std::string unknown, std::vector<double> values)
    : axes_(std::move(axes)), unknown_(std::move(unknown)), values_(std::move(values)) {
  if (axes_.size() < 3 || axes_.size() > 4) fail(ErrorKind::ShapeMismatch, "grids have dimension 3 or 4");
  std::size_t total = 1;
  strides_.assign(axes_.size(), 1);
  for (std::size_t i = axes_.size(); i-- > 0;) {
    const Axis& a = axes_[i];
    if (!(a.spacing > 0) || a.count < 5 || !std::isfinite(a.origin))
      fail(ErrorKind::ShapeMismatch, "axes need spacing > 0 and at least five points");
    strides_[i] = total;
    total *= a.count;
  }
  if (values_.size() != total) fail(ErrorKind::ShapeMismatch, "value count differs from the product of axis counts");
}

Grid Grid::sample(std::vector<Axis> axes, std::string unknown, const std::function<double(const std::vector<double>&)>& f) {
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.count;
  Grid g(std::move(axes), std::move(unknown), std::vector<double>(total, 0.0));
  for (std::size_t k = 0; k < total; ++k) g.values_[k] = f(g.point(g.unflat(k)));
  return g;
}

std::size_t Grid::flat(const std::vector<std::size_t>& idx) const {
  std::size_t k = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) k += idx[i] * strides_[i];
  return k;
}

std::vector<std::size_t> Grid::unflat(std::size_t k) const {
  std::vector<std::size_t> idx(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    idx[i] = k / strides_[i];
    k %= strides_[i];
  }
  return idx;
}

std::vector<double> Grid::point(const std::vector<std::size_t>& idx) const {
  std::vector<double> x(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) x[i] = axes_[i].at(idx[i]);
  return x;
}

std::string Grid::to_json() const {
  nlohmann::ordered_json j;
  j["dimension"] = axes_.size();
  j["axes"] = nlohmann::ordered_json::array();
  for (const auto& a : axes_) j["axes"].push_back({{"origin", a.origin}, {"spacing", a.spacing}, {"count", a.count}});
  j["unknown"] = unknown_;
  auto& v = j["values"] = nlohmann::ordered_json::array();
  for (double x : values_) {
    if (std::isfinite(x)) v.push_back(x);
    else v.push_back(nullptr);  // missing node
  }
  return j.dump() + "\n";
}

Grid Grid::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::InvalidArgument, std::string("grid file is not JSON: ") + e.what());
  }
  try {
    std::vector<Axis> axes;
    for (const auto& a : j.at("axes"))
      axes.push_back({a.at("origin").get<double>(), a.at("spacing").get<double>(), a.at("count").get<std::size_t>()});
    if (j.at("dimension").get<std::size_t>() != axes.size()) fail(ErrorKind::ShapeMismatch, "dimension differs from the axis list");
    std::vector<double> values;
    values.reserve(j.at("values").size());
    for (const auto& v : j.at("values")) values.push_back(v.is_null() ? std::nan("") : v.get<double>());
    return Grid(std::move(axes), j.at("unknown").get<std::string>(), std::move(values));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("malformed grid file: ") + e.what());
  }
}

double fd_jet(const Grid& grid, const std::vector<std::size_t>& node, const MultiIndex& multi) {
  std::size_t n = grid.dimension();
  if (node.size() != n || multi.size() != n) fail(ErrorKind::ShapeMismatch, "node or multi-index has the wrong length");
  int order = 0;
  std::vector<std::size_t> dirs;
  for (std::size_t i = 0; i < n; ++i) {
    if (multi[i] < 0) fail(ErrorKind::InvalidArgument, "negative multi-index");
    order += multi[i];
    for (int k = 0; k < multi[i]; ++k) dirs.push_back(i);
    if (node[i] >= grid.axes()[i].count) fail(ErrorKind::ShapeMismatch, "node outside the grid");
  }
  if (order > 2) fail(ErrorKind::InvalidArgument, "finite-difference jets stop at order 2");
  std::size_t k = grid.flat(node);
  const auto& v = grid.values();
  if (order == 0) return v[k];
  for (std::size_t i = 0; i < n; ++i)
    if (node[i] == 0 || node[i] + 1 >= grid.axes()[i].count) fail(ErrorKind::BoundaryNode, "node lies on the grid boundary");
  if (order == 1) {
    std::size_t s = grid.stride(dirs[0]);
    return (v[k + s] - v[k - s]) / (2 * grid.axes()[dirs[0]].spacing);
  }
  if (dirs[0] == dirs[1]) {
    std::size_t s = grid.stride(dirs[0]);
    double h = grid.axes()[dirs[0]].spacing;
    return (v[k + s] - 2 * v[k] + v[k - s]) / (h * h);
  }
  std::size_t s = grid.stride(dirs[0]), t = grid.stride(dirs[1]);
  double hh = 4 * grid.axes()[dirs[0]].spacing * grid.axes()[dirs[1]].spacing;
  return (v[k + s + t] - v[k + s - t] - v[k - s + t] + v[k - s - t]) / hh;
}

// ---- residuals -------------------------------------------------------------

namespace {

// Polynomial expression flattened onto numbered slots.
class FlatExpr {
 public:
  explicit FlatExpr(const Expr& e) {
    std::function<void(const Expr&)> gather = [&](const Expr& x) {
      for (const auto& s : x.symbols()) {
        if (s.is_atom()) gather(s.argument());
        else slots_.push_back(s);
      }
    };
    gather(e);
    std::sort(slots_.begin(), slots_.end());
    slots_.erase(std::unique(slots_.begin(), slots_.end()), slots_.end());
    num_ = flatten(e.numerator());
    if (!e.denominator().is_one()) den_ = flatten(e.denominator());
  }

  const std::vector<Symbol>& slots() const noexcept { return slots_; }

  double operator()(const std::vector<double>& v) const {
    double n = eval(num_, v);
    if (den_.empty()) return n;
    return n / eval(den_, v);
  }

 private:
  struct Term {
    double coef;
    std::vector<std::pair<int, int>> factors;  // slot (or -1 - atom) and exponent
  };

  std::vector<Term> flatten(const Poly& p) {
    std::vector<Term> out;
    for (const auto& t : p.terms()) {
      Term ft{t.coef.get_d(), {}};
      for (const auto& [s, e] : t.mono.factors()) {
        if (s.is_atom()) {
          atoms_.push_back(std::make_unique<FlatExpr>(s.argument()));
          atom_slots_.emplace_back();
          for (const auto& a : atoms_.back()->slots()) atom_slots_.back().push_back(index(a));
          ft.factors.emplace_back(-1 - static_cast<int>(atoms_.size() - 1), e);
        } else {
          ft.factors.emplace_back(index(s), e);
        }
      }
      out.push_back(std::move(ft));
    }
    return out;
  }

  int index(const Symbol& s) const {
    auto it = std::lower_bound(slots_.begin(), slots_.end(), s);
    return static_cast<int>(it - slots_.begin());
  }

  double eval(const std::vector<Term>& terms, const std::vector<double>& v) const {
    double acc = 0;
    for (const auto& t : terms) {
      double x = t.coef;
      for (const auto& [slot, e] : t.factors) {
        double y;
        if (slot >= 0) {
          y = v[static_cast<std::size_t>(slot)];
        } else {
          auto a = static_cast<std::size_t>(-1 - slot);
          std::vector<double> sub;
          for (int k : atom_slots_[a]) sub.push_back(v[static_cast<std::size_t>(k)]);
          y = std::exp((*atoms_[a])(sub));
        }
        x *= e == 1 ? y : std::pow(y, e);
      }
      acc += x;
    }
    return acc;
  }

  std::vector<Symbol> slots_;
  std::vector<Term> num_, den_;
  std::vector<std::unique_ptr<FlatExpr>> atoms_;
  std::vector<std::vector<int>> atom_slots_;
};

struct SlotSource {
  enum Kind { Coordinate, Constant, Jet } kind;
  std::size_t index = 0;  // coordinate position or unknown index
  double value = 0;
  MultiIndex multi;
};

std::vector<SlotSource> bind_slots(const FlatExpr& fe, const Pde& p, const std::vector<std::string>& unknowns,
                                   const std::map<std::string, double>& params) {
  std::vector<SlotSource> out;
  for (const auto& s : fe.slots()) {
    SlotSource src{SlotSource::Constant, 0, 0, {}};
    if (s.kind() == SymbolKind::Coordinate) {
      auto pos = p.chart.position(s);
      if (!pos) fail(ErrorKind::ChartMismatch, "coordinate '" + s.name() + "' is not on the chart");
      src = {SlotSource::Coordinate, *pos, 0, {}};
    } else if (s.kind() == SymbolKind::Parameter) {
      auto it = params.find(s.name());
      if (it == params.end()) fail(ErrorKind::UnknownIdentifier, "parameter '" + s.name() + "' needs a value");
      src.value = it->second;
    } else {
      auto u = std::find(unknowns.begin(), unknowns.end(), s.name());
      if (u == unknowns.end()) fail(ErrorKind::UnknownIdentifier, "no values for function '" + s.name() + "'");
      if (s.order() > 2) fail(ErrorKind::InvalidArgument, "numeric residuals use jets up to order 2");
      src = {SlotSource::Jet, static_cast<std::size_t>(u - unknowns.begin()), 0, s.multi()};
    }
    out.push_back(std::move(src));
  }
  return out;
}

double jet_value(const Jet2& j, const MultiIndex& m) {
  std::vector<int> dirs;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (int k = 0; k < m[i]; ++k) dirs.push_back(static_cast<int>(i));
  if (dirs.empty()) return j.v;
  if (dirs.size() == 1) return j.g[dirs[0]];
  return j.h[dirs[0]][dirs[1]];
}

// Exact rational for doubles with short binary expansions.
std::optional<Scalar> exact_binary(double v) {
  if (!std::isfinite(v)) return std::nullopt;
  Scalar s(v);
  s.canonicalize();
  if (mpz_sizeinbase(s.get_den().get_mpz_t(), 2) > 21) return std::nullopt;
  return s;
}

}  // namespace

ClosedFormResidual residual_closed_form(const Pde& p, const std::vector<ClosedFormSolution>& solutions,
                                        const std::map<std::string, double>& params, double a, double b, std::size_t n) {
  const Chart& chart = p.chart;
  std::size_t dim = chart.dimension();
  if (n < 2) fail(ErrorKind::InvalidArgument, "sample count must be at least 2");
  std::vector<std::string> unknowns;
  for (const auto& s : solutions) {
    if (!chart.knows_function(s.unknown))
      fail(ErrorKind::InvalidArgument, "'" + s.unknown + "' is not a function of " + p.name);
    if (int only = chart.restriction(s.unknown); only >= 0)
      for (const auto& v : variables(s.expression))
        if (auto i = resolve_coordinate(v, chart); i && static_cast<int>(*i) != only)
          fail(ErrorKind::InvalidArgument, "'" + s.unknown + "' depends on " + chart.coordinate(static_cast<std::size_t>(only)).name() + " only");
    unknowns.push_back(s.unknown);
  }
  for (const auto& j : p.expression.jets())
    if (chart.knows_function(j.name()) && std::find(unknowns.begin(), unknowns.end(), j.name()) == unknowns.end())
      fail(ErrorKind::InvalidArgument, "no closed form given for '" + j.name() + "'");

  std::vector<std::map<std::string, double>> merged;
  for (const auto& s : solutions) {
    auto m = params;
    for (const auto& [k, v] : s.parameters) m[k] = v;
    merged.push_back(std::move(m));
  }

  ClosedFormResidual out;

  // Exact route.
  std::vector<std::optional<Expr>> exact;
  bool all_exact = true;
  for (const auto& s : solutions) {
    exact.push_back(to_symbolic(s.expression, chart));
    all_exact = all_exact && exact.back().has_value();
  }
  if (all_exact) {
    Bindings bind;
    for (const auto& j : p.expression.jets()) {
      auto u = std::find(unknowns.begin(), unknowns.end(), j.name());
      if (u == unknowns.end()) continue;
      Expr d = *exact[static_cast<std::size_t>(u - unknowns.begin())];
      for (std::size_t i = 0; i < dim; ++i)
        for (int k = 0; k < j.multi()[i]; ++k) d = partial_derivative(d, chart.coordinate(i));
      bind[j] = d;
    }
    Expr r = substitute(p.expression, bind);
    Bindings pb;
    for (std::size_t i = 0; i < solutions.size(); ++i)
      for (const auto& [k, v] : merged[i])
        if (auto q = exact_binary(v)) pb[param(k)] = Expr(*q);
    out.symbolic = substitute(r, pb);
  }

  // Sampled route.
  std::vector<CompiledForm> forms;
  for (std::size_t i = 0; i < solutions.size(); ++i) forms.emplace_back(solutions[i].expression, chart, merged[i]);
  FlatExpr fe(p.expression);
  std::map<std::string, double> all_params = params;
  for (const auto& m : merged) all_params.insert(m.begin(), m.end());
  auto src = bind_slots(fe, p, unknowns, all_params);

  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> x(dim), slot(src.size());
  std::vector<Jet2> jets(forms.size());
  double step = (b - a) / static_cast<double>(n - 1);
  while (true) {
    for (std::size_t i = 0; i < dim; ++i) x[i] = a + step * static_cast<double>(idx[i]);
    for (std::size_t i = 0; i < forms.size(); ++i) jets[i] = forms[i].jet2(x);
    for (std::size_t k = 0; k < src.size(); ++k) {
      const auto& s = src[k];
      slot[k] = s.kind == SlotSource::Coordinate ? x[s.index] : s.kind == SlotSource::Constant ? s.value : jet_value(jets[s.index], s.multi);
    }
    double r = fe(slot);
    if (!std::isfinite(r)) fail(ErrorKind::EvaluationDomain, "residual is not finite at a sample point");
    out.max_abs = std::max(out.max_abs, std::abs(r));
    ++out.samples;
    std::size_t i = dim;
    while (i-- > 0) {
      if (++idx[i] < n) break;
      idx[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

GridResidual residual_grid(const Pde& p, const std::vector<const Grid*>& grids, const std::map<std::string, double>& params) {
  if (grids.empty()) fail(ErrorKind::ShapeMismatch, "no grids given");
  const Grid& g0 = *grids[0];
  if (g0.dimension() != p.chart.dimension()) fail(ErrorKind::ShapeMismatch, "grid dimension differs from the chart of " + p.name);
  std::vector<std::string> unknowns;
  for (const Grid* g : grids) {
    if (g->axes() != g0.axes()) fail(ErrorKind::ShapeMismatch, "grids have different axes");
    unknowns.push_back(g->unknown());
  }
  FlatExpr fe(p.expression);
  auto src = bind_slots(fe, p, unknowns, params);

  GridResidual out;
  std::size_t dim = g0.dimension();
  std::vector<double> slot(src.size());
  double sumsq = 0;
  for (std::size_t k = 0; k < g0.size(); ++k) {
    auto idx = g0.unflat(k);
    bool inner = true;
    for (std::size_t i = 0; i < dim; ++i) inner = inner && idx[i] >= 1 && idx[i] + 1 < g0.axes()[i].count;
    if (!inner) continue;
    for (std::size_t s = 0; s < src.size(); ++s) {
      const auto& ss = src[s];
      slot[s] = ss.kind == SlotSource::Coordinate ? g0.axes()[ss.index].at(idx[ss.index])
                : ss.kind == SlotSource::Constant ? ss.value
                                                  : fd_jet(*grids[ss.index], idx, ss.multi);
    }
    double r = fe(slot);
    if (!std::isfinite(r)) {
      ++out.skipped;
      continue;
    }
    ++out.interior;
    out.max_abs = std::max(out.max_abs, std::abs(r));
    sumsq += r * r;
  }
  if (out.interior) out.l2 = std::sqrt(sumsq / static_cast<double>(out.interior));
  return out;
}

GridResidual residual_grid(const Pde& p, const Grid& grid, const std::map<std::string, double>& params) {
  return residual_grid(p, std::vector<const Grid*>{&grid}, params);
}

double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace vweb
