#include "vweb/poly.hpp"

#include <algorithm>

#include "vweb/errors.hpp"

namespace vweb {

// ---- Monomial --------------------------------------------------------------

Monomial::Monomial(const Symbol& s, int exponent) {
  if (exponent < 0) fail(ErrorKind::InvalidArgument, "negative exponent");
  if (exponent > 0) {
    factors_.emplace_back(s, exponent);
    degree_ = exponent;
  }
}

Monomial Monomial::from_factors(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end(),
            [](const Factor& a, const Factor& b) { return a.first < b.first; });
  Monomial m;
  for (auto& f : factors) {
    if (f.second == 0) continue;
    if (f.second < 0) fail(ErrorKind::InvalidArgument, "negative exponent");
    if (!m.factors_.empty() && m.factors_.back().first == f.first)
      m.factors_.back().second += f.second;
    else
      m.factors_.push_back(f);
    m.degree_ += f.second;
  }
  return m;
}

int Monomial::exponent(const Symbol& s) const {
  for (const auto& [sym, e] : factors_)
    if (sym == s) return e;
  return 0;
}

bool Monomial::divides(const Monomial& other) const {
  if (degree_ > other.degree_) return false;
  std::size_t j = 0;
  for (const auto& [sym, e] : factors_) {
    while (j < other.factors_.size() && other.factors_[j].first < sym) ++j;
    if (j == other.factors_.size() || !(other.factors_[j].first == sym) || other.factors_[j].second < e)
      return false;
  }
  return true;
}

Monomial Monomial::divided_by(const Monomial& other) const {
  Monomial m;
  std::size_t j = 0;
  for (const auto& [sym, e] : factors_) {
    int d = e;
    if (j < other.factors_.size() && other.factors_[j].first == sym) d -= other.factors_[j++].second;
    if (d < 0) fail(ErrorKind::InvalidArgument, "monomial does not divide");
    if (d > 0) {
      m.factors_.emplace_back(sym, d);
      m.degree_ += d;
    }
  }
  if (j != other.factors_.size()) fail(ErrorKind::InvalidArgument, "monomial does not divide");
  return m;
}

Monomial Monomial::without(const Symbol& s) const {
  Monomial m;
  for (const auto& f : factors_) {
    if (f.first == s) continue;
    m.factors_.push_back(f);
    m.degree_ += f.second;
  }
  return m;
}

bool Monomial::involves_jets() const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [](const Factor& f) { return f.first.involves_jets(); });
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  Monomial m;
  m.factors_.reserve(a.factors_.size() + b.factors_.size());
  std::size_t i = 0, j = 0;
  while (i < a.factors_.size() || j < b.factors_.size()) {
    if (j == b.factors_.size() || (i < a.factors_.size() && a.factors_[i].first < b.factors_[j].first)) {
      m.factors_.push_back(a.factors_[i++]);
    } else if (i == a.factors_.size() || b.factors_[j].first < a.factors_[i].first) {
      m.factors_.push_back(b.factors_[j++]);
    } else {
      m.factors_.emplace_back(a.factors_[i].first, a.factors_[i].second + b.factors_[j].second);
      ++i;
      ++j;
    }
  }
  m.degree_ = a.degree_ + b.degree_;
  return m;
}

bool operator==(const Monomial& a, const Monomial& b) noexcept {
  if (a.degree_ != b.degree_ || a.factors_.size() != b.factors_.size()) return false;
  for (std::size_t i = 0; i < a.factors_.size(); ++i)
    if (a.factors_[i].second != b.factors_[i].second || !(a.factors_[i].first == b.factors_[i].first))
      return false;
  return true;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  Monomial m;
  std::size_t j = 0;
  for (const auto& [sym, e] : a.factors_) {
    while (j < b.factors_.size() && b.factors_[j].first < sym) ++j;
    if (j < b.factors_.size() && b.factors_[j].first == sym) {
      int d = std::min(e, b.factors_[j].second);
      m.factors_.emplace_back(sym, d);
      m.degree_ += d;
    }
  }
  return m;
}

int compare(const Monomial& a, const Monomial& b) noexcept {
  if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  std::size_t i = 0, j = 0;
  while (i < fa.size() && j < fb.size()) {
    auto c = fa[i].first <=> fb[j].first;
    if (c == 0) {
      if (fa[i].second != fb[j].second) return fa[i].second > fb[j].second ? 1 : -1;
      ++i;
      ++j;
    } else {
      // The smaller key is the larger variable.
      return c < 0 ? 1 : -1;
    }
  }
  if (i < fa.size()) return 1;
  if (j < fb.size()) return -1;
  return 0;
}

// ---- Poly ------------------------------------------------------------------

Poly::Poly(const Scalar& c) {
  if (c != 0) terms_.push_back({Monomial(), c});
}

Poly::Poly(const Symbol& s, int exponent) { terms_.push_back({Monomial(s, exponent), Scalar(1)}); }

Poly::Poly(const Monomial& m, const Scalar& c) {
  if (c != 0) terms_.push_back({m, c});
}

Poly Poly::from_sorted(std::vector<Term>&& terms) {
  Poly p;
  p.terms_ = std::move(terms);
  return p;
}

Poly Poly::from_map(std::map<Monomial, Scalar, MonomialGreater>&& acc) {
  Poly p;
  p.terms_.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) p.terms_.push_back({m, std::move(c)});
  return p;
}

bool Poly::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.empty());
}

bool Poly::is_one() const noexcept {
  return terms_.size() == 1 && terms_[0].mono.empty() && terms_[0].coef == 1;
}

Scalar Poly::constant_value() const {
  if (!terms_.empty() && terms_.back().mono.empty()) return terms_.back().coef;
  return Scalar(0);
}

int Poly::total_degree() const noexcept { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

std::set<Symbol> Poly::symbols() const {
  std::set<Symbol> out;
  for (const auto& t : terms_)
    for (const auto& f : t.mono.factors()) out.insert(f.first);
  return out;
}

bool Poly::involves_jets() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.mono.involves_jets(); });
}

bool Poly::mentions(const Symbol& s) const {
  for (const auto& t : terms_)
    for (const auto& f : t.mono.factors())
      if (f.first.mentions(s)) return true;
  return false;
}

int Poly::degree_in(const Symbol& x) const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exponent(x));
  return d;
}

std::map<int, Poly> Poly::collect(const Symbol& x) const {
  std::map<int, std::map<Monomial, Scalar, MonomialGreater>> acc;
  for (const auto& t : terms_) acc[t.mono.exponent(x)][t.mono.without(x)] += t.coef;
  std::map<int, Poly> out;
  for (auto& [e, m] : acc) {
    Poly p = from_map(std::move(m));
    if (!p.is_zero()) out.emplace(e, std::move(p));
  }
  return out;
}

Monomial Poly::monomial_content() const {
  if (terms_.empty()) return Monomial();
  Monomial g = terms_.front().mono;
  for (const auto& t : terms_) {
    if (g.empty()) break;
    g = Monomial::gcd(g, t.mono);
  }
  return g;
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& t : p.terms_) t.coef = -t.coef;
  return p;
}

namespace {

Poly merge(const Poly& a, const Poly& b, bool subtract) {
  std::vector<Poly::Term> out;
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  out.reserve(ta.size() + tb.size());
  std::size_t i = 0, j = 0;
  while (i < ta.size() || j < tb.size()) {
    int c = 0;
    if (i == ta.size()) c = -1;
    else if (j == tb.size()) c = 1;
    else c = compare(ta[i].mono, tb[j].mono);
    if (c > 0) {
      out.push_back(ta[i++]);
    } else if (c < 0) {
      out.push_back(tb[j]);
      if (subtract) out.back().coef = -out.back().coef;
      ++j;
    } else {
      Scalar s = subtract ? Scalar(ta[i].coef - tb[j].coef) : Scalar(ta[i].coef + tb[j].coef);
      if (s != 0) out.push_back({ta[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  return Poly::from_sorted(std::move(out));
}

}  // namespace

Poly operator+(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return merge(a, b, false);
}

Poly operator-(const Poly& a, const Poly& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return merge(a, b, true);
}

Poly Poly::scaled(const Scalar& c) const {
  if (c == 0) return Poly();
  Poly p = *this;
  for (auto& t : p.terms_) t.coef *= c;
  return p;
}

Poly Poly::times(const Monomial& m) const {
  if (m.empty()) return *this;
  Poly p = *this;
  for (auto& t : p.terms_) t.mono = t.mono * m;
  return p;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  if (a.size() == 1) return b.times(a.terms_[0].mono).scaled(a.terms_[0].coef);
  if (b.size() == 1) return a.times(b.terms_[0].mono).scaled(b.terms_[0].coef);
  std::map<Monomial, Scalar, MonomialGreater> acc;
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) {
      auto [it, inserted] = acc.try_emplace(x.mono * y.mono, x.coef * y.coef);
      if (!inserted) it->second += x.coef * y.coef;
    }
  return Poly::from_map(std::move(acc));
}

Poly operator*(const Scalar& c, const Poly& p) { return p.scaled(c); }

Poly Poly::pow(int n) const {
  if (n < 0) fail(ErrorKind::InvalidArgument, "negative power of a polynomial");
  Poly result(1);
  Poly base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

Poly Poly::partial(const Symbol& x) const {
  std::map<Monomial, Scalar, MonomialGreater> acc;
  for (const auto& t : terms_) {
    int e = t.mono.exponent(x);
    if (e == 0) continue;
    Monomial m = t.mono.divided_by(Monomial(x));
    acc[m] += t.coef * e;
  }
  return from_map(std::move(acc));
}

bool operator==(const Poly& a, const Poly& b) noexcept {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].coef != b.terms_[i].coef || !(a.terms_[i].mono == b.terms_[i].mono)) return false;
  return true;
}

}  // namespace vweb
