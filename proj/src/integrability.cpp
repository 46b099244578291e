#include "vweb/integrability.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <tuple>

#include "vweb/calculus.hpp"
#include "vweb/errors.hpp"

namespace vweb {

bool is_unknown_jet(const Symbol& s, const Chart& chart) {
  if (s.is_jet()) return chart.is_unknown(s.name());
  if (s.is_atom())
    for (const auto& t : s.argument().symbols())
      if (is_unknown_jet(t, chart)) return true;
  return false;
}

bool is_jet_free(const Poly& p, const Chart& chart) {
  for (const auto& s : p.symbols())
    if (is_unknown_jet(s, chart)) return false;
  return true;
}

std::map<Monomial, Poly, MonomialGreater> split_by_jets(const Poly& p, const Chart& chart) {
  std::map<Monomial, std::map<Monomial, Scalar, MonomialGreater>, MonomialGreater> groups;
  for (const auto& t : p.terms()) {
    std::vector<Monomial::Factor> jet, rest;
    for (const auto& f : t.mono.factors()) (is_unknown_jet(f.first, chart) ? jet : rest).push_back(f);
    auto& g = groups[Monomial::from_factors(std::move(jet))];
    g[Monomial::from_factors(std::move(rest))] += t.coef;
  }
  std::map<Monomial, Poly, MonomialGreater> out;
  for (auto& [m, acc] : groups) {
    Poly c = Poly::from_map(std::move(acc));
    if (!c.is_zero()) out.emplace(m, std::move(c));
  }
  return out;
}

Poly remove_jet_free_content(const Poly& p, const Chart& chart) {
  if (p.is_zero()) return p;
  auto parts = split_by_jets(p, chart);
  std::vector<const Poly*> cs;
  for (const auto& [m, c] : parts) cs.push_back(&c);
  std::sort(cs.begin(), cs.end(), [](const Poly* a, const Poly* b) { return a->size() < b->size(); });
  Poly g;
  for (const Poly* c : cs) {
    g = gcd(g, *c);
    if (g.is_constant()) break;
  }
  Poly q = p;
  if (!g.is_constant()) q = *divide_exact(p, g);
  return q.scaled(primitive_scale(q));
}

namespace {

std::size_t jet_terms(const Poly& p, const Chart& chart) { return split_by_jets(p, chart).size(); }

void dedupe(std::vector<Poly>& gens) {
  std::vector<Poly> out;
  for (auto& g : gens) {
    if (g.is_zero()) continue;
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(std::move(g));
  }
  gens = std::move(out);
}

}  // namespace

std::vector<Poly> reduce_generators(std::vector<Poly> gens, const Chart& chart) {
  for (auto& g : gens) g = remove_jet_free_content(g, chart);
  dedupe(gens);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < gens.size() && !changed; ++a) {
      auto ga = split_by_jets(gens[a], chart);
      for (std::size_t b = 0; b < gens.size() && !changed; ++b) {
        if (a == b) continue;
        auto gb = split_by_jets(gens[b], chart);
        for (const auto& [m, ca] : ga) {
          auto it = gb.find(m);
          if (it == gb.end()) continue;
          Poly cand = remove_jet_free_content(it->second * gens[a] - ca * gens[b], chart);
          if (cand.is_zero()) {
            gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(a));
            changed = true;
            break;
          }
          if (jet_terms(cand, chart) < ga.size()) {
            gens[a] = std::move(cand);
            changed = true;
            break;
          }
        }
      }
    }
    if (changed) dedupe(gens);
  }
  std::vector<std::pair<std::pair<std::size_t, std::string>, Poly>> keyed;
  for (auto& g : gens) keyed.push_back({{jet_terms(g, chart), render(g, &chart)}, std::move(g)});
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Poly> out;
  for (auto& [k, g] : keyed) out.push_back(std::move(g));
  return out;
}

DifferentialForm integrability_residual(const DifferentialForm& alpha) {
  if (alpha.degree() != 1) fail(ErrorKind::InvalidArgument, "integrability residual needs a one-form");
  return wedge(alpha, exterior_derivative(alpha));
}

namespace {

PdeSystem make_system(const std::string& name, const Chart& chart, const std::vector<Poly>& gens) {
  PdeSystem s{name, chart, {}};
  for (std::size_t i = 0; i < gens.size(); ++i)
    s.members.push_back(Pde{name + "[" + std::to_string(i) + "]", chart, Expr(gens[i]), {}});
  return s;
}

}  // namespace

PdeSystem lambda_reduce(const DifferentialForm& residual, const Symbol& lambda, const std::string& name) {
  std::vector<Poly> gens;
  for (const auto& [k, c] : residual.coefficients())
    for (auto& [e, p] : c.numerator().collect(lambda)) gens.push_back(p);
  return make_system(name, residual.chart(), reduce_generators(std::move(gens), residual.chart()));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Equal: return "equal";
    case Verdict::EqualUpToFactor: return "equal_up_to_jet_free_factor";
    case Verdict::Different: return "different";
  }
  return "different";
}

std::string Equivalence::factor_text(const Chart* chart) const {
  if (verdict == Verdict::Different) return "";
  std::string n = render(factor_num, chart);
  if (factor_den.is_one()) return n;
  std::string d = render(factor_den, chart);
  if (n.find(' ') != std::string::npos) n = "(" + n + ")";
  if (d.find_first_of(" *") != std::string::npos) d = "(" + d + ")";
  return n + "/" + d;
}

Equivalence equivalent_up_to_factor(const Expr& p, const Expr& q, const Chart& chart) {
  Equivalence out;
  if (p.is_zero() || q.is_zero()) {
    if (p.is_zero() && q.is_zero()) {
      out.verdict = Verdict::Equal;
      out.factor_num = Poly(1);
      out.factor_den = Poly(1);
    }
    return out;
  }
  auto sp = split_by_jets(p.numerator(), chart);
  auto sq = split_by_jets(q.numerator(), chart);
  if (sp.size() != sq.size()) return out;
  auto ip = sp.begin();
  auto iq = sq.begin();
  const Poly& a0 = ip->second;
  const Poly& b0 = iq->second;
  for (; ip != sp.end(); ++ip, ++iq) {
    if (!(ip->first == iq->first)) return out;
    if (!(ip->second * b0 == a0 * iq->second)) return out;
  }
  Poly num = a0 * q.denominator();
  Poly den = b0 * p.denominator();
  Poly g = gcd(num, den);
  if (!g.is_constant()) {
    num = *divide_exact(num, g);
    den = *divide_exact(den, g);
  }
  Scalar s = primitive_scale(den);
  out.factor_num = num.scaled(s);
  out.factor_den = den.scaled(s);
  out.verdict = out.factor_num.is_one() && out.factor_den.is_one() ? Verdict::Equal : Verdict::EqualUpToFactor;
  return out;
}

Equivalence equivalent_up_to_factor(const Pde& p, const Pde& q) {
  if (p.chart.dimension() != q.chart.dimension())
    fail(ErrorKind::ChartMismatch, "equations live on charts of different dimension");
  Chart merged = q.chart;
  std::vector<std::string> u = q.chart.unknowns();
  for (const auto& x : p.chart.unknowns())
    if (std::find(u.begin(), u.end(), x) == u.end()) u.push_back(x);
  return equivalent_up_to_factor(p.expression, q.expression, merged.with_unknowns(u));
}

// ---- consequence check -----------------------------------------------------

namespace {

std::vector<Expr> first_jets(const Chart& chart) {
  std::vector<Expr> out;
  for (const auto& fn : chart.unknowns())
    for (std::size_t i = 0; i < chart.dimension(); ++i) out.push_back(chart.jet(fn, chart.multi_from_positions({i})));
  return out;
}

// Fraction-free elimination on an augmented matrix; true if consistent.
bool consistent(std::vector<std::vector<Poly>> rows, std::size_t unknowns) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < unknowns && r < rows.size(); ++c) {
    std::size_t best = rows.size();
    for (std::size_t i = r; i < rows.size(); ++i)
      if (!rows[i][c].is_zero() && (best == rows.size() || rows[i][c].size() < rows[best][c].size())) best = i;
    if (best == rows.size()) continue;
    std::swap(rows[r], rows[best]);
    const Poly piv = rows[r][c];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      Poly a = rows[i][c];
      for (std::size_t k = 0; k <= unknowns; ++k) rows[i][k] = piv * rows[i][k] - a * rows[r][k];
      // keep entries small: divide the row by the gcd of its entries
      Poly g;
      for (const auto& x : rows[i]) {
        g = gcd(g, x);
        if (g.is_constant()) break;
      }
      if (!g.is_zero() && !g.is_constant())
        for (auto& x : rows[i]) x = *divide_exact(x, g);
    }
    ++r;
  }
  for (std::size_t i = r; i < rows.size(); ++i)
    if (!rows[i][unknowns].is_zero()) return false;
  return true;
}

}  // namespace

bool is_consequence(const Expr& extra, const std::vector<Expr>& members, const Chart& chart) {
  if (extra.is_zero()) return true;
  std::vector<Expr> vs = first_jets(chart);
  std::vector<Expr> multipliers = vs;
  vs.push_back(Expr(1));
  std::vector<std::map<Monomial, Poly, MonomialGreater>> products;
  for (const auto& m : members)
    for (const auto& v : vs) products.push_back(split_by_jets((v * Expr(m.numerator())).numerator(), chart));
  for (const auto& mult : multipliers) {
    auto rhs = split_by_jets((mult * Expr(extra.numerator())).numerator(), chart);
    std::map<Monomial, std::vector<Poly>, MonomialGreater> eqs;
    auto row = [&](const Monomial& mono) -> std::vector<Poly>& {
      auto it = eqs.find(mono);
      if (it == eqs.end()) it = eqs.emplace(mono, std::vector<Poly>(products.size() + 1)).first;
      return it->second;
    };
    for (std::size_t j = 0; j < products.size(); ++j)
      for (const auto& [mono, c] : products[j]) row(mono)[j] = c;
    for (const auto& [mono, c] : rhs) row(mono)[products.size()] = c;
    std::vector<std::vector<Poly>> rows;
    for (auto& [mono, r] : eqs) rows.push_back(std::move(r));
    if (consistent(std::move(rows), products.size())) return true;
  }
  return false;
}

SystemComparison compare_systems(const std::vector<Expr>& derived, const PdeSystem& target) {
  SystemComparison out;
  out.target_covered.assign(target.members.size(), false);
  std::vector<Expr> texprs;
  for (const auto& m : target.members) texprs.push_back(m.expression);
  bool all_equal = true;
  for (const auto& d : derived) {
    MemberMatch mm;
    for (std::size_t j = 0; j < texprs.size(); ++j) {
      Equivalence e = equivalent_up_to_factor(d, texprs[j], target.chart);
      if (e.verdict == Verdict::Different) continue;
      mm.target = static_cast<int>(j);
      mm.equivalence = e;
      out.target_covered[j] = true;
      if (e.verdict != Verdict::Equal) all_equal = false;
      break;
    }
    if (mm.target < 0) {
      mm.consequence = is_consequence(d, texprs, target.chart);
      all_equal = false;
    }
    out.derived.push_back(std::move(mm));
  }
  out.ok = std::all_of(out.target_covered.begin(), out.target_covered.end(), [](bool b) { return b; }) &&
           std::all_of(out.derived.begin(), out.derived.end(), [](const MemberMatch& m) { return m.target >= 0 || m.consequence; });
  out.all_equal = out.ok && all_equal;
  return out;
}

SystemComparison compare_systems(const PdeSystem& derived, const PdeSystem& target) {
  std::vector<Expr> es;
  for (const auto& m : derived.members) es.push_back(m.expression);
  return compare_systems(es, target);
}

// ---- Frobenius -------------------------------------------------------------

namespace {

Scalar random_rational(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  int n = num(rng);
  if (n == 0) n = 11;
  return make_scalar(n, den(rng));
}

std::size_t numeric_rank(std::vector<std::vector<Scalar>> m) {
  std::size_t rank = 0;
  std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[rank], m[p]);
    for (std::size_t i = rank + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      Scalar f = m[i][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

void check_independent(const std::vector<VectorField>& fields) {
  std::set<Symbol> syms;
  for (const auto& x : fields)
    for (const auto& c : x.components())
      for (const auto& s : c.symbols()) syms.insert(s);
  std::mt19937 rng(20240611u);
  for (int attempt = 0; attempt < 3; ++attempt) {
    Bindings b;
    for (const auto& s : syms) b.emplace(s, Expr(random_rational(rng)));
    std::vector<std::vector<Scalar>> m;
    bool ok = true;
    for (const auto& x : fields) {
      std::vector<Scalar> row;
      for (const auto& c : x.components()) {
        try {
          row.push_back(substitute(c, b).constant_value());
        } catch (const Error&) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      m.push_back(std::move(row));
    }
    if (ok && numeric_rank(m) == fields.size()) return;
  }
  fail(ErrorKind::DependentFields, "fields are dependent at generic sample points");
}

struct Pivot {
  std::size_t row, col;
};

bool has_unknown_jets(const Expr& e, const Chart& chart) { return !is_jet_free(e.numerator(), chart); }

}  // namespace

PdeSystem frobenius_conditions(const std::vector<VectorField>& fields, const Symbol& lambda, const std::string& name) {
  if (fields.empty()) fail(ErrorKind::InvalidArgument, "empty distribution");
  const Chart& chart = fields[0].chart();
  for (const auto& x : fields)
    if (!(x.chart() == chart)) fail(ErrorKind::ChartMismatch, "fields on different charts");
  check_independent(fields);

  std::vector<std::vector<Expr>> rows;
  for (const auto& x : fields) rows.push_back(x.components());
  std::vector<Pivot> pivots;
  std::vector<bool> used_row(rows.size(), false), used_col(chart.dimension(), false);
  for (std::size_t step = 0; step < rows.size(); ++step) {
    // minimal (has jets, degree, size)
    std::tuple<int, int, std::size_t> best{2, 0, 0};
    Pivot bp{rows.size(), 0};
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (used_row[r]) continue;
      for (std::size_t c = 0; c < chart.dimension(); ++c) {
        if (used_col[c] || rows[r][c].is_zero()) continue;
        const Expr& e = rows[r][c];
        std::tuple<int, int, std::size_t> key{has_unknown_jets(e, chart) ? 1 : 0, e.numerator().total_degree(), e.numerator().size()};
        if (bp.row == rows.size() || key < best) {
          best = key;
          bp = {r, c};
        }
      }
    }
    if (bp.row == rows.size()) fail(ErrorKind::DependentFields, "fields are dependent");
    used_row[bp.row] = used_col[bp.col] = true;
    const Expr piv = rows[bp.row][bp.col];
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (used_row[r] || rows[r][bp.col].is_zero()) continue;
      Expr a = rows[r][bp.col];
      for (std::size_t c = 0; c < chart.dimension(); ++c) rows[r][c] = piv * rows[r][c] - a * rows[bp.row][c];
    }
    pivots.push_back(bp);
  }

  std::vector<Poly> gens;
  for (std::size_t i = 0; i < fields.size(); ++i)
    for (std::size_t j = i + 1; j < fields.size(); ++j) {
      std::vector<Expr> b = lie_bracket(fields[i], fields[j]).components();
      for (const auto& p : pivots) {
        if (b[p.col].is_zero()) continue;
        Expr piv = rows[p.row][p.col];
        Expr a = b[p.col];
        for (std::size_t c = 0; c < b.size(); ++c) b[c] = piv * b[c] - a * rows[p.row][c];
      }
      for (std::size_t c = 0; c < b.size(); ++c) {
        if (b[c].is_zero()) continue;
        for (auto& [e, poly] : b[c].numerator().collect(lambda)) gens.push_back(poly);
      }
    }
  return make_system(name, chart, reduce_generators(std::move(gens), chart));
}

// ---- cross compatibility ---------------------------------------------------

namespace {

struct Relation {
  std::size_t a;  // f_a
  std::size_t b;  // H_b
};

int single_position(const Symbol& s) {
  if (s.order() != 1) return -1;
  for (std::size_t i = 0; i < s.multi().size(); ++i)
    if (s.multi()[i] == 1) return static_cast<int>(i);
  return -1;
}

}  // namespace

PdeSystem cross_compatibility(const PdeSystem& system, Eliminate which) {
  const Chart& chart = system.chart;
  if (chart.unknowns().size() != 2) fail(ErrorKind::MalformedSystem, "expected two unknowns (f and H)");
  const std::string fn = chart.unknowns()[0];
  const std::string hn = chart.unknowns()[1];
  std::vector<Relation> rel;
  int k = -1;
  for (const auto& m : system.members) {
    const Expr& e = m.expression;
    if (!e.is_polynomial() || e.numerator().size() != 2) fail(ErrorKind::MalformedSystem, "member " + m.name + " is not f_i + H_j f_k");
    int a = -1, b = -1, kk = -1;
    for (const auto& t : e.numerator().terms()) {
      if (t.coef != 1) fail(ErrorKind::MalformedSystem, "unexpected coefficient in " + m.name);
      const auto& fs = t.mono.factors();
      if (fs.size() == 1 && fs[0].second == 1 && fs[0].first.is_jet() && fs[0].first.name() == fn) {
        a = single_position(fs[0].first);
      } else if (fs.size() == 2 && fs[0].second == 1 && fs[1].second == 1) {
        for (const auto& [s, ex] : fs) {
          if (!s.is_jet()) continue;
          if (s.name() == hn) b = single_position(s);
          if (s.name() == fn) kk = single_position(s);
        }
      }
    }
    if (a < 0 || b < 0 || kk < 0) fail(ErrorKind::MalformedSystem, "member " + m.name + " is not f_i + H_j f_k");
    if (k >= 0 && kk != k) fail(ErrorKind::MalformedSystem, "members disagree on the distinguished jet");
    if (a == kk) fail(ErrorKind::MalformedSystem, "relation solved for the distinguished jet");
    k = kk;
    rel.push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b)});
  }
  if (rel.size() < 2) fail(ErrorKind::MalformedSystem, "need at least two relations");
  const std::size_t kp = static_cast<std::size_t>(k);
  auto F = [&](std::vector<std::size_t> pos) { return chart.jet(fn, chart.multi_from_positions(pos)); };
  auto Hj = [&](std::size_t p) { return chart.jet(hn, chart.multi_from_positions({p})); };

  std::vector<Poly> gens;
  if (which == Eliminate::H) {
    for (std::size_t i = 0; i < rel.size(); ++i)
      for (std::size_t j = i + 1; j < rel.size(); ++j) {
        const auto& ri = rel[i];
        const auto& rj = rel[j];
        Expr e = (F({ri.a, rj.b}) * F({kp}) - F({ri.a}) * F({kp, rj.b})) - (F({rj.a, ri.b}) * F({kp}) - F({rj.a}) * F({kp, ri.b}));
        gens.push_back(e.numerator());
      }
    Chart out = chart.with_unknowns({fn});
    return make_system(system.name + "/f", out, reduce_generators(std::move(gens), out));
  }

  // Rewrite every f-jet that is not a pure f_k-derivative through the prolonged relations.
  std::map<Symbol, Expr> memo;
  std::function<Expr(const Symbol&)> image = [&](const Symbol& s) -> Expr {
    if (auto it = memo.find(s); it != memo.end()) return it->second;
    const MultiIndex& m = s.multi();
    const Relation* use = nullptr;
    for (const auto& r : rel)
      if (m[r.a] > 0) {
        use = &r;
        break;
      }
    Expr out(s);
    if (use) {
      MultiIndex beta = m;
      --beta[use->a];
      Expr img = -total_derivative(Hj(use->b) * F({kp}), chart, beta);
      Bindings b;
      for (const auto& t : img.symbols())
        if (t.is_jet() && t.name() == fn && !(t == s)) b.emplace(t, image(t));
      out = substitute(img, b);
    }
    memo.emplace(s, out);
    return out;
  };
  auto rewrite = [&](const Expr& e) {
    Bindings b;
    for (const auto& t : e.symbols())
      if (t.is_jet() && t.name() == fn) b.emplace(t, image(t));
    return substitute(e, b);
  };
  Chart hchart = chart.with_unknowns({hn});
  Chart fchart = chart.with_unknowns({fn});
  for (std::size_t i = 0; i < rel.size(); ++i)
    for (std::size_t j = i + 1; j < rel.size(); ++j) {
      const Expr& mi = system.members[i].expression;
      const Expr& mj = system.members[j].expression;
      Expr e = total_derivative(mi, chart, rel[j].a) - total_derivative(mj, chart, rel[i].a);
      e = rewrite(e);
      // coefficients of the remaining pure f_k jets are conditions on H
      for (const auto& [mono, c] : split_by_jets(e.numerator(), fchart)) gens.push_back(c);
    }
  return make_system(system.name + "/H", hchart, reduce_generators(std::move(gens), hchart));
}

}  // namespace vweb
