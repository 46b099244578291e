#include "vweb/degeneration.hpp"

#include <chrono>
#include <functional>
#include <algorithm>
#include <map>
#include <set>

#include "vweb/errors.hpp"

namespace vweb {

namespace {

using Matrix = std::vector<std::vector<Expr>>;

Matrix invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = Expr(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t r = c; r < n; ++r) {
      if (a[r][c].is_zero()) continue;
      if (piv == n || (a[r][c].is_constant() && !a[piv][c].is_constant())) piv = r;
    }
    if (piv == n) fail(ErrorKind::SingularChange, "jacobian determinant vanishes identically");
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const Expr p = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] = a[c][k] / p;
      inv[c][k] = inv[c][k] / p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c].is_zero()) continue;
      const Expr f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] = a[r][k] - f * a[c][k];
        inv[r][k] = inv[r][k] - f * inv[c][k];
      }
    }
  }
  return inv;
}

void collect_symbols(const Expr& e, std::set<Symbol>& out) {
  for (const auto& s : e.symbols()) {
    out.insert(s);
    if (s.is_atom()) collect_symbols(s.argument(), out);
  }
}

// Memoized chain rule for one change.
class Puller {
 public:
  explicit Puller(const CoordinateChange& c) : c_(c) {
    for (std::size_t i = 0; i < c.source().dimension(); ++i) coords_.emplace(c.source().coordinate(i), c.forward()[i]);
  }

  Expr operator()(const Expr& e) {
    std::set<Symbol> syms;
    collect_symbols(e, syms);
    Bindings b = coords_;
    for (const auto& s : syms)
      if (s.is_jet()) b.emplace(s, jet(s));
    return substitute(e, b);
  }

  Expr jet(const Symbol& s) {
    if (auto it = memo_.find(s); it != memo_.end()) return it->second;
    const Chart& src = c_.source();
    const Chart& tgt = c_.target();
    const std::string& fn = s.name();
    if (!src.knows_function(fn)) fail(ErrorKind::ChartMismatch, "jet of '" + fn + "' is foreign to the source chart");
    if (!tgt.knows_function(fn)) fail(ErrorKind::ChartMismatch, "target chart does not carry '" + fn + "'");
    int sr = src.restriction(fn);
    if (sr >= 0) {
      int tr = tgt.restriction(fn);
      if (tr < 0 || !(c_.forward()[static_cast<std::size_t>(sr)] == tgt.coord(static_cast<std::size_t>(tr))))
        fail(ErrorKind::InvalidArgument, "univariate function '" + fn + "' must keep its own coordinate");
    }
    Expr out;
    const MultiIndex& m = s.multi();
    std::size_t i = 0;
    while (i < m.size() && m[i] == 0) ++i;
    if (i == m.size()) {
      out = tgt.jet(fn, MultiIndex(tgt.dimension(), 0));
    } else {
      MultiIndex lower = m;
      --lower[i];
      Expr prev = jet(src.jet_symbol(fn, lower));
      const auto& M = c_.inverse_jacobian();
      for (std::size_t j = 0; j < tgt.dimension(); ++j)
        if (!M[j][i].is_zero()) out = out + M[j][i] * total_derivative(prev, tgt, j);
    }
    memo_.emplace(s, out);
    return out;
  }

 private:
  const CoordinateChange& c_;
  Bindings coords_;
  std::map<Symbol, Expr> memo_;
};

}  // namespace

CoordinateChange::CoordinateChange(Chart source, Chart target, std::vector<Expr> forward)
    : source_(std::move(source)), target_(std::move(target)), forward_(std::move(forward)) {
  const std::size_t n = source_.dimension();
  if (target_.dimension() != n || forward_.size() != n)
    fail(ErrorKind::ChartMismatch, "coordinate change between charts of different dimension");
  jac_.assign(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (forward_[i].involves_jets()) fail(ErrorKind::InvalidArgument, "coordinate change may not involve jets");
    for (std::size_t j = 0; j < n; ++j) jac_[i][j] = partial_derivative(forward_[i], target_.coordinate(j));
  }
  inv_ = invert(jac_);
}

CoordinateChange CoordinateChange::rescaling(const Chart& chart, const std::vector<Expr>& factors) {
  if (factors.size() != chart.dimension()) fail(ErrorKind::InvalidArgument, "one factor per coordinate");
  std::vector<Expr> fwd;
  for (std::size_t i = 0; i < factors.size(); ++i) fwd.push_back(factors[i] * chart.coord(i));
  return CoordinateChange(chart, chart, fwd);
}

CoordinateChange CoordinateChange::identity(const Chart& chart) {
  return rescaling(chart, std::vector<Expr>(chart.dimension(), Expr(1)));
}

CoordinateChange CoordinateChange::then(const CoordinateChange& next) const {
  if (!(next.source_.coordinates() == target_.coordinates()))
    fail(ErrorKind::ChartMismatch, "changes do not compose");
  Bindings b;
  for (std::size_t j = 0; j < target_.dimension(); ++j) b.emplace(target_.coordinate(j), next.forward_[j]);
  std::vector<Expr> fwd;
  for (const auto& f : forward_) fwd.push_back(substitute(f, b));
  return CoordinateChange(source_, next.target_, fwd);
}

Expr pullback(const Expr& e, const CoordinateChange& change) { return Puller(change)(e); }

Pde pullback_pde(const Pde& p, const CoordinateChange& change) {
  if (!(p.chart == change.source())) fail(ErrorKind::ChartMismatch, "equation does not live on the source chart");
  Pde out = p;
  out.chart = change.target();
  out.expression = pullback(p.expression, change);
  return out;
}

PdeSystem pullback_system(const PdeSystem& s, const CoordinateChange& change) {
  if (!(s.chart == change.source())) fail(ErrorKind::ChartMismatch, "system does not live on the source chart");
  Puller pull(change);
  PdeSystem out = s;
  out.chart = change.target();
  for (auto& m : out.members) {
    m.chart = change.target();
    m.expression = pull(m.expression);
  }
  return out;
}

DifferentialForm pullback_form(const DifferentialForm& w, const CoordinateChange& change) {
  if (!(w.chart() == change.source())) fail(ErrorKind::ChartMismatch, "form does not live on the source chart");
  Puller pull(change);
  const Chart& t = change.target();
  std::vector<DifferentialForm> dp;
  for (std::size_t i = 0; i < t.dimension(); ++i) dp.push_back(DifferentialForm::one_form(t, change.jacobian()[i]));
  DifferentialForm out(t, w.degree());
  for (const auto& [key, c] : w.coefficients()) {
    DifferentialForm term = DifferentialForm::function(t, pull(c));
    for (int i : key) term = wedge(term, dp[static_cast<std::size_t>(i)]);
    out = out + term;
  }
  return out;
}

Chart redefined_chart(const Chart& chart, const UnknownRedefinition& r) {
  if (!chart.is_unknown(r.old_name)) fail(ErrorKind::InvalidArgument, "'" + r.old_name + "' is not an unknown of the chart");
  std::vector<std::string> u;
  for (const auto& x : chart.unknowns()) {
    const std::string& y = x == r.old_name ? r.new_name : x;
    if (std::find(u.begin(), u.end(), y) == u.end()) u.push_back(y);
  }
  return chart.with_unknowns(u);
}

Expr apply_redefinition(const Expr& e, const Chart& chart, const UnknownRedefinition& r) {
  Chart out = redefined_chart(chart, r);
  std::set<Symbol> syms;
  collect_symbols(e, syms);
  const Expr image = r.base + r.scale * out.function(r.new_name);
  Bindings b;
  for (const auto& s : syms)
    if (s.is_jet() && s.name() == r.old_name) b.emplace(s, total_derivative(image, out, s.multi()));
  return substitute(e, b);
}

Pde apply_redefinition(const Pde& p, const UnknownRedefinition& r) {
  Pde out = p;
  out.expression = apply_redefinition(p.expression, p.chart, r);
  out.chart = redefined_chart(p.chart, r);
  return out;
}

PdeSystem apply_redefinition(const PdeSystem& s, const UnknownRedefinition& r) {
  PdeSystem out = s;
  for (auto& m : out.members) m = apply_redefinition(m, r);
  out.chart = redefined_chart(s.chart, r);
  return out;
}

DifferentialForm limit_form(const DifferentialForm& w, const Symbol& param) {
  std::optional<int> low;
  for (const auto& [k, c] : w.coefficients()) {
    auto v = leading_order(c, param);
    if (v && (!low || *v < *low)) low = v;
  }
  if (!low) return w;
  return w.map_coefficients([&](const Expr& c) { return limit_after_premultiply(c, param, -*low); });
}

// ---- recipes ---------------------------------------------------------------

namespace {

struct State {
  std::optional<PdeSystem> sys;
  std::optional<DifferentialForm> form;
};

PdeSystem& need_system(State& st) {
  if (!st.sys) fail(ErrorKind::InvalidArgument, "step needs equations, the recipe holds a form");
  return *st.sys;
}

void run_step(const Step& s, State& st, CaseReport& r) {
  if (auto* b = std::get_if<step::Bind>(&s)) {
    if (st.sys)
      for (auto& m : st.sys->members) m.expression = substitute(m.expression, b->bindings);
    if (st.form) *st.form = st.form->map_coefficients([&](const Expr& c) { return substitute(c, b->bindings); });
  } else if (auto* c = std::get_if<step::Change>(&s)) {
    if (st.sys) st.sys = pullback_system(*st.sys, c->change);
    if (st.form) st.form = pullback_form(*st.form, c->change);
  } else if (auto* d = std::get_if<step::Redefine>(&s)) {
    st.sys = apply_redefinition(need_system(st), d->redefinition);
  } else if (auto* rc = std::get_if<step::Recombine>(&s)) {
    PdeSystem& sys = need_system(st);
    std::vector<Pde> out;
    for (std::size_t i = 0; i < rc->rows.size(); ++i) {
      if (rc->rows[i].size() != sys.members.size()) fail(ErrorKind::InvalidArgument, "recombination row length");
      Expr e;
      for (std::size_t j = 0; j < sys.members.size(); ++j)
        if (rc->rows[i][j] != 0) e = e + Expr(rc->rows[i][j]) * sys.members[j].expression;
      out.push_back(Pde{rc->labels.at(i), sys.chart, e, {}});
    }
    sys.members = std::move(out);
  } else if (auto* l = std::get_if<step::Limit>(&s)) {
    if (st.form && !st.sys) {
      st.form = limit_form(*st.form, l->param);
      return;
    }
    PdeSystem& sys = need_system(st);
    if (l->k.size() != sys.members.size()) fail(ErrorKind::InvalidArgument, "one premultiplier per member");
    for (std::size_t i = 0; i < sys.members.size(); ++i) {
      Pde& m = sys.members[i];
      LimitInfo info;
      info.member = m.name;
      info.k = l->k[i];
      if (i < l->printed_k.size()) info.printed_k = l->printed_k[i];
      auto low = leading_order(m.expression, l->param);
      if (!low) fail(ErrorKind::InvalidArgument, "member " + m.name + " vanishes identically");
      info.sharp_k = -*low;
      try {
        (void)limit_after_premultiply(m.expression, l->param, info.k - 1);
        info.diagnostic = "k-1 = " + std::to_string(info.k - 1) + " leaves no pole";
      } catch (const PoleRemains& p) {
        info.sharp = true;
        info.diagnostic = "k-1 leaves pole of order " + std::to_string(p.order());
      }
      Expr lim = limit_after_premultiply(m.expression, l->param, info.k);  // PoleRemains propagates
      if (lim.is_zero()) {
        info.sharp = false;
        info.diagnostic += "; limit vanishes at k";
      }
      m.expression = lim;
      r.limits.push_back(std::move(info));
    }
  } else if (std::get_if<step::Reduce>(&s)) {
    if (!st.form) fail(ErrorKind::InvalidArgument, "reduce needs a form");
    st.sys = lambda_reduce(integrability_residual(*st.form), spectral_symbol(), r.id);
  } else if (auto* cmp = std::get_if<step::Compare>(&s)) {
    PdeSystem target = specialize(pde_catalog(cmp->target), cmp->specialization);
    r.checks.push_back(make_check(cmp->target, need_system(st), target, cmp->required, cmp->note));
  }
}

}  // namespace

CaseReport run_recipe(const LimitRecipe& recipe) {
  auto t0 = std::chrono::steady_clock::now();
  CaseReport r;
  r.id = recipe.id;
  r.notes = recipe.notes;
  State st;
  if (auto* s = std::get_if<PdeSystem>(&recipe.source))
    st.sys = *s;
  else
    st.form = std::get<DifferentialForm>(recipe.source);
  try {
    for (const auto& s : recipe.steps) run_step(s, st, r);
  } catch (const Error& e) {
    r.error = e.what();
  }
  finalize(r);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace vweb
