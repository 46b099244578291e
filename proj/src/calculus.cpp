#include "vweb/calculus.hpp"

#include <algorithm>

#include "vweb/errors.hpp"

namespace vweb {

namespace {

using Acc = std::map<Monomial, Scalar, MonomialGreater>;

void add_into(Acc& acc, const Monomial& m, const Scalar& c) {
  auto [it, inserted] = acc.try_emplace(m, c);
  if (!inserted) it->second += c;
}

// D_i of a polynomial; atoms with non-polynomial derivative land in `extra`.
Expr derive_poly(const Poly& p, const Chart& chart, std::size_t i) {
  if (p.is_constant()) return Expr();
  const Symbol& xi = chart.coordinate(i);
  Acc acc;
  Expr extra;
  std::map<Symbol, Expr> atom_cache;
  for (const auto& t : p.terms()) {
    for (const auto& [s, e] : t.mono.factors()) {
      Scalar c = t.coef * e;
      switch (s.kind()) {
        case SymbolKind::Coordinate:
          if (s == xi) add_into(acc, t.mono.divided_by(Monomial(s)), c);
          break;
        case SymbolKind::Parameter:
          break;
        case SymbolKind::Jet:
          if (s.only() >= 0 && static_cast<std::size_t>(s.only()) != i) break;
          add_into(acc, t.mono.divided_by(Monomial(s)) * Monomial(s.raised(i)), c);
          break;
        case SymbolKind::ExpAtom: {
          auto it = atom_cache.find(s);
          if (it == atom_cache.end()) it = atom_cache.emplace(s, total_derivative(s.argument(), chart, i)).first;
          const Expr& da = it->second;
          if (da.is_zero()) break;
          // d(a^e) = e a^e da
          if (da.is_polynomial()) {
            for (const auto& u : da.numerator().terms()) add_into(acc, t.mono * u.mono, c * u.coef);
          } else {
            extra += Expr(Poly(t.mono, c)) * da;
          }
          break;
        }
      }
    }
  }
  Expr out(Poly::from_map(std::move(acc)));
  return extra.is_zero() ? out : out + extra;
}

}  // namespace

Expr total_derivative(const Expr& e, const Chart& chart, std::size_t i) {
  if (i >= chart.dimension()) fail(ErrorKind::ChartMismatch, "coordinate index outside the chart");
  Expr dn = derive_poly(e.numerator(), chart, i);
  if (e.is_polynomial()) return dn;
  Expr dd = derive_poly(e.denominator(), chart, i);
  Expr den(e.denominator());
  if (dd.is_zero()) return dn / den;
  return (dn * den - Expr(e.numerator()) * dd) / den.pow(2);
}

Expr total_derivative(const Expr& e, const Chart& chart, const MultiIndex& m) {
  if (m.size() != chart.dimension()) fail(ErrorKind::ChartMismatch, "multi-index length differs from chart dimension");
  Expr out = e;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (int k = 0; k < m[i]; ++k) out = total_derivative(out, chart, i);
  return out;
}

namespace {

Expr partial_poly(const Poly& p, const Symbol& x) {
  Expr out(p.partial(x));
  for (const auto& s : p.symbols()) {
    if (!s.is_atom() || !s.argument().mentions(x)) continue;
    Expr da = partial_derivative(s.argument(), x);
    out += Expr(p.partial(s)) * Expr(s) * da;
  }
  return out;
}

}  // namespace

Expr partial_derivative(const Expr& e, const Symbol& s) {
  Expr dn = partial_poly(e.numerator(), s);
  if (e.is_polynomial()) return dn;
  Expr dd = partial_poly(e.denominator(), s);
  Expr den(e.denominator());
  if (dd.is_zero()) return dn / den;
  return (dn * den - Expr(e.numerator()) * dd) / den.pow(2);
}

// ---- substitution ----------------------------------------------------------

namespace {

class Substituter {
 public:
  Substituter(const Expr& e, const Bindings& b) {
    for (const auto& s : e.symbols()) {
      if (auto it = b.find(s); it != b.end()) {
        add(s, it->second);
      } else if (s.is_atom()) {
        bool touched = std::any_of(b.begin(), b.end(), [&](const auto& kv) { return s.argument().mentions(kv.first); });
        if (touched) add(s, Expr::exp(substitute(s.argument(), b)));
      }
    }
    need_.assign(dens_.size(), 0);
    scan(e.numerator());
    scan(e.denominator());
  }

  bool trivial() const { return images_.empty(); }

  Poly image(const Poly& p) {
    Acc acc;
    std::vector<int> count(dens_.size());
    for (const auto& t : p.terms()) {
      std::fill(count.begin(), count.end(), 0);
      std::vector<Monomial::Factor> keep;
      Poly prod(t.coef);
      for (const auto& [s, e] : t.mono.factors()) {
        auto it = images_.find(s);
        if (it == images_.end()) {
          keep.emplace_back(s, e);
          continue;
        }
        prod = prod * num_power(it->second, e);
        if (it->second.group >= 0) count[static_cast<std::size_t>(it->second.group)] += e;
      }
      for (std::size_t g = 0; g < dens_.size(); ++g)
        if (need_[g] > count[g]) prod = prod * den_power(g, need_[g] - count[g]);
      Monomial km = Monomial::from_factors(std::move(keep));
      for (const auto& u : prod.terms()) add_into(acc, u.mono * km, u.coef);
    }
    return Poly::from_map(std::move(acc));
  }

 private:
  struct Image {
    Poly num;
    int group = -1;
    std::vector<Poly> powers;
  };

  void add(const Symbol& s, const Expr& v) {
    Image im;
    im.num = v.numerator();
    if (!v.denominator().is_one()) {
      auto it = std::find(dens_.begin(), dens_.end(), v.denominator());
      im.group = static_cast<int>(it - dens_.begin());
      if (it == dens_.end()) {
        dens_.push_back(v.denominator());
        den_powers_.emplace_back();
      }
    }
    images_.emplace(s, std::move(im));
  }

  void scan(const Poly& p) {
    std::vector<int> count(dens_.size());
    for (const auto& t : p.terms()) {
      std::fill(count.begin(), count.end(), 0);
      for (const auto& [s, e] : t.mono.factors())
        if (auto it = images_.find(s); it != images_.end() && it->second.group >= 0)
          count[static_cast<std::size_t>(it->second.group)] += e;
      for (std::size_t g = 0; g < dens_.size(); ++g) need_[g] = std::max(need_[g], count[g]);
    }
  }

  static const Poly& power(std::vector<Poly>& cache, const Poly& base, int e) {
    if (cache.empty()) cache.push_back(Poly(1));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * base);
    return cache[static_cast<std::size_t>(e)];
  }

  const Poly& num_power(Image& im, int e) { return power(im.powers, im.num, e); }
  const Poly& den_power(std::size_t g, int e) { return power(den_powers_[g], dens_[g], e); }

  std::map<Symbol, Image> images_;
  std::vector<Poly> dens_;
  std::vector<std::vector<Poly>> den_powers_;
  std::vector<int> need_;
};

}  // namespace

Expr substitute(const Expr& e, const Bindings& bindings) {
  if (bindings.empty() || e.is_constant()) return e;
  Substituter sub(e, bindings);
  if (sub.trivial()) return e;
  Poly n = sub.image(e.numerator());
  Poly d = sub.image(e.denominator());
  if (d.is_zero()) fail(ErrorKind::ZeroDenominator, "substitution makes a denominator vanish");
  if (d.involves_jets()) fail(ErrorKind::JetInDenominator, "binding puts a jet variable into a denominator");
  return Expr::fraction(n, d);
}

std::map<int, Expr> collect(const Expr& e, const Symbol& x) {
  if (e.denominator().mentions(x)) fail(ErrorKind::InvalidArgument, "denominator depends on " + x.name());
  std::map<int, Expr> out;
  for (auto& [k, c] : e.numerator().collect(x)) {
    if (e.is_polynomial())
      out.emplace(k, Expr(c));
    else
      out.emplace(k, Expr::fraction(c, e.denominator()));
  }
  return out;
}

// ---- Laurent series --------------------------------------------------------

namespace {

void check_atoms(const Expr& e, const Symbol& param) {
  for (const auto& s : e.symbols())
    if (s.is_atom() && s.argument().mentions(param))
      fail(ErrorKind::EssentialDependence, "exponential atom " + s.name() + " depends on " + param.name());
}

struct Split {
  int valuation = 0;
  std::vector<Poly> num;  // shifted so num[0] != 0
  std::vector<Poly> den;  // shifted so den[0] != 0
};

std::vector<Poly> shifted(const Poly& p, const Symbol& x, int& low) {
  auto parts = p.collect(x);
  low = parts.begin()->first;
  int high = parts.rbegin()->first;
  std::vector<Poly> out(static_cast<std::size_t>(high - low + 1));
  for (auto& [k, c] : parts) out[static_cast<std::size_t>(k - low)] = std::move(c);
  return out;
}

Split split(const Expr& e, const Symbol& param) {
  check_atoms(e, param);
  Split s;
  int vn = 0, vd = 0;
  s.num = shifted(e.numerator(), param, vn);
  s.den = shifted(e.denominator(), param, vd);
  s.valuation = vn - vd;
  return s;
}

// Power-series coefficients c_0..c_n of num/den with den[0] != 0.
std::vector<Expr> quotient_series(const Split& s, int n) {
  std::vector<Expr> c;
  Expr d0(s.den[0]);
  for (int j = 0; j <= n; ++j) {
    Expr acc = static_cast<std::size_t>(j) < s.num.size() ? Expr(s.num[static_cast<std::size_t>(j)]) : Expr();
    for (int i = 1; i <= j && static_cast<std::size_t>(i) < s.den.size(); ++i)
      if (!s.den[static_cast<std::size_t>(i)].is_zero())
        acc -= Expr(s.den[static_cast<std::size_t>(i)]) * c[static_cast<std::size_t>(j - i)];
    c.push_back(acc / d0);
  }
  return c;
}

}  // namespace

std::vector<Expr> series_coefficients(const Expr& e, const Symbol& param, int low, int high) {
  if (high < low) fail(ErrorKind::InvalidArgument, "empty exponent range");
  std::vector<Expr> out(static_cast<std::size_t>(high - low + 1));
  if (e.is_zero()) return out;
  Split s = split(e, param);
  int n = high - s.valuation;
  if (n < 0) return out;
  auto c = quotient_series(s, n);
  for (int m = std::max(low, s.valuation); m <= high; ++m)
    out[static_cast<std::size_t>(m - low)] = c[static_cast<std::size_t>(m - s.valuation)];
  return out;
}

std::optional<int> leading_order(const Expr& e, const Symbol& param) {
  if (e.is_zero()) return std::nullopt;
  return split(e, param).valuation;
}

Expr limit_after_premultiply(const Expr& e, const Symbol& param, int k) {
  if (e.is_zero()) return Expr();
  Split s = split(e, param);
  int lowest = s.valuation + k;
  if (lowest < 0)
    throw PoleRemains(lowest, "premultiplier " + param.name() + "^" + std::to_string(k) + " leaves a pole of order " +
                                  std::to_string(-lowest));
  int j = -k - s.valuation;
  if (j < 0) return Expr();
  return quotient_series(s, j).back();
}

}  // namespace vweb
