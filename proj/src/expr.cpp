#include "vweb/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "vweb/chart.hpp"
#include "vweb/errors.hpp"

namespace vweb {

namespace {

// gcd(num, den) for a jet-free den: group num by its jet part, so the gcd
// only ever runs on jet-free coefficient polynomials.
Poly jet_gcd(const Poly& num, const Poly& den) {
  if (num.is_zero() || den.is_constant()) return Poly(1);
  if (den.is_monomial()) {
    Monomial g = Monomial::gcd(den.leading().mono, num.monomial_content());
    return Poly(g, 1);
  }
  std::map<Monomial, std::map<Monomial, Scalar, MonomialGreater>, MonomialGreater> groups;
  for (const auto& t : num.terms()) {
    std::vector<Monomial::Factor> jet, rest;
    for (const auto& f : t.mono.factors()) (f.first.involves_jets() ? jet : rest).push_back(f);
    groups[Monomial::from_factors(std::move(jet))][Monomial::from_factors(std::move(rest))] += t.coef;
  }
  std::vector<Poly> coeffs;
  coeffs.reserve(groups.size());
  for (auto& [j, m] : groups) coeffs.push_back(Poly::from_map(std::move(m)));
  std::sort(coeffs.begin(), coeffs.end(), [](const Poly& a, const Poly& b) { return a.size() < b.size(); });
  Poly g = den;
  for (const auto& c : coeffs) {
    g = gcd(g, c);
    if (g.is_constant()) return Poly(1);
  }
  return g;
}

Poly exact(const Poly& a, const Poly& b) {
  if (b.is_one()) return a;
  auto q = divide_exact(a, b);
  if (!q) fail(ErrorKind::InvalidArgument, "internal: inexact division during normalization");
  return std::move(*q);
}

}  // namespace

Expr Expr::fraction(const Poly& num, const Poly& den) {
  if (den.is_zero()) fail(ErrorKind::ZeroDenominator, "denominator normalizes to zero");
  if (den.involves_jets()) fail(ErrorKind::JetInDenominator, "jet variable in a denominator");
  Expr e;
  if (num.is_zero()) return e;
  if (den.is_constant()) {
    e.num_ = num.scaled(Scalar(1) / den.constant_value());
    return e;
  }
  Poly g = jet_gcd(num, den);
  Poly n = exact(num, g);
  Poly d = exact(den, g);
  return from_coprime(n, d);
}

Expr Expr::from_coprime(const Poly& num, const Poly& den) {
  Expr e;
  if (num.is_zero()) return e;
  if (den.is_constant()) {
    e.num_ = num.scaled(Scalar(1) / den.constant_value());
    return e;
  }
  Scalar s = primitive_scale(den);
  e.num_ = num.scaled(s);
  e.den_ = den.scaled(s);
  return e;
}

Expr Expr::exp(const Expr& argument) {
  if (argument.is_zero()) return Expr(1);
  return Expr(Symbol::exp_atom(argument));
}

Scalar Expr::constant_value() const {
  if (!is_constant()) fail(ErrorKind::InvalidArgument, "expression is not constant: " + render(*this));
  return num_.constant_value();
}

std::set<Symbol> Expr::symbols() const {
  std::set<Symbol> s = num_.symbols();
  for (const auto& x : den_.symbols()) s.insert(x);
  return s;
}

std::set<Symbol> Expr::jets() const {
  std::set<Symbol> out;
  for (const auto& s : num_.symbols())
    if (s.is_jet()) out.insert(s);
  return out;
}

Expr Expr::operator-() const {
  Expr e = *this;
  e.num_ = -num_;
  return e;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_.is_one() && b.den_.is_one()) return Expr(a.num_ + b.num_);
  if (a.den_ == b.den_) return Expr::fraction(a.num_ + b.num_, a.den_);
  Poly g = gcd(a.den_, b.den_);
  Poly da = exact(a.den_, g);
  Poly db = exact(b.den_, g);
  return Expr::fraction(a.num_ * db + b.num_ * da, da * b.den_);
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.den_.is_one() && b.den_.is_one()) return Expr(a.num_ * b.num_);
  Poly g1 = jet_gcd(a.num_, b.den_);
  Poly g2 = jet_gcd(b.num_, a.den_);
  return Expr::from_coprime(exact(a.num_, g1) * exact(b.num_, g2), exact(a.den_, g2) * exact(b.den_, g1));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) fail(ErrorKind::ZeroDenominator, "division by zero");
  if (b.num_.involves_jets()) fail(ErrorKind::JetInDenominator, "division by a jet expression");
  if (a.is_zero()) return Expr();
  Poly g1 = jet_gcd(a.num_, b.num_);
  Poly g2 = gcd(a.den_, b.den_);
  return Expr::from_coprime(exact(a.num_, g1) * exact(b.den_, g2), exact(a.den_, g2) * exact(b.num_, g1));
}

Expr Expr::pow(int n) const {
  if (n < 0) return (Expr(1) / *this).pow(-n);
  if (n == 0) return Expr(1);
  Expr e;
  e.num_ = num_.pow(n);
  e.den_ = den_.pow(n);
  return e;
}

// ---- rendering -------------------------------------------------------------

namespace {

std::string default_subscript(const MultiIndex& m) {
  // 3-charts are labelled 1..3 and 4-charts 0..3 throughout the catalog.
  int base = m.size() == 3 ? 1 : 0;
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) s.append(static_cast<std::size_t>(m[i]), static_cast<char>('0' + base + i));
  return s;
}

}  // namespace

std::string render(const Symbol& s, const Chart* chart) {
  if (!s.is_jet()) return s.name();
  const MultiIndex& m = s.multi();
  if (s.order() == 0) return s.name();
  if (chart && chart->dimension() == m.size()) {
    std::string sub;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (int k = 0; k < m[i]; ++k) sub += chart->label(i);
    if (chart->single_char_labels()) return s.name() + "_" + sub;
    return s.name() + "_{" + sub + "}";
  }
  return s.name() + "_" + default_subscript(m);
}

namespace {

std::string render_factor(const Monomial::Factor& f, const Chart* chart) {
  std::string out;
  if (f.first.is_atom())
    out = "exp(" + render(f.first.argument(), chart) + ")";
  else
    out = render(f.first, chart);
  if (f.second != 1) out += "^" + std::to_string(f.second);
  return out;
}

std::string render_term(const Poly::Term& t, const Chart* chart) {
  std::string mono;
  for (const auto& f : t.mono.factors()) {
    if (!mono.empty()) mono += "*";
    mono += render_factor(f, chart);
  }
  if (mono.empty()) return t.coef.get_str();
  if (t.coef == 1) return mono;
  if (t.coef == -1) return "-" + mono;
  return t.coef.get_str() + "*" + mono;
}

}  // namespace

std::string render(const Poly& p, const Chart* chart) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& t : p.terms()) {
    std::string s = render_term(t, chart);
    if (out.empty())
      out = s;
    else if (s[0] == '-')
      out += " - " + s.substr(1);
    else
      out += " + " + s;
  }
  return out;
}

std::string render(const Expr& e, const Chart* chart) {
  if (e.denominator().is_one()) return render(e.numerator(), chart);
  std::string n = render(e.numerator(), chart);
  std::string d = render(e.denominator(), chart);
  if (n.find(' ') != std::string::npos) n = "(" + n + ")";
  if (d.find_first_of(" *") != std::string::npos) d = "(" + d + ")";
  return n + "/" + d;
}

// ---- numeric evaluation ----------------------------------------------------

namespace {

double eval_poly(const Poly& p, const std::function<double(const Symbol&)>& value) {
  double acc = 0.0;
  for (const auto& t : p.terms()) {
    double term = t.coef.get_d();
    for (const auto& [s, e] : t.mono.factors()) {
      double v = s.is_atom() ? std::exp(evaluate(s.argument(), value)) : value(s);
      term *= e == 1 ? v : std::pow(v, e);
    }
    acc += term;
  }
  return acc;
}

}  // namespace

double evaluate(const Expr& e, const std::function<double(const Symbol&)>& value) {
  double n = eval_poly(e.numerator(), value);
  if (e.denominator().is_one()) return n;
  double d = eval_poly(e.denominator(), value);
  if (d == 0.0) fail(ErrorKind::EvaluationDomain, "denominator vanishes at the sample point");
  return n / d;
}

// ---- scalars ---------------------------------------------------------------

Scalar parse_scalar(const std::string& text) {
  auto bad = [&]() -> Scalar { fail(ErrorKind::InvalidArgument, "not a number: '" + text + "'"); };
  if (text.empty()) return bad();
  if (auto slash = text.find('/'); slash != std::string::npos) {
    Scalar s;
    if (s.set_str(text, 10) != 0) return bad();
    if (s.get_den() == 0) fail(ErrorKind::ZeroDenominator, "zero denominator in '" + text + "'");
    s.canonicalize();
    return s;
  }
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') neg = text[i++] == '-';
  std::string digits;
  long exp10 = 0;
  bool seen_digit = false, seen_dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      seen_digit = true;
      if (seen_dot) --exp10;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!seen_digit) return bad();
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') return bad();
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(text.substr(i + 1), &used);
    } catch (const std::exception&) {
      return bad();
    }
    if (used != text.size() - i - 1) return bad();
    exp10 += e;
  }
  mpz_class n(digits, 10);
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  Scalar s = exp10 < 0 ? Scalar(n, p10) : Scalar(n * p10);
  s.canonicalize();
  return neg ? Scalar(-s) : s;
}

}  // namespace vweb
