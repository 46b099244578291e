// Multivariate gcd over Q: recursive content / primitive-PRS scheme.
#include <algorithm>

#include "vweb/errors.hpp"
#include "vweb/poly.hpp"

namespace vweb {

Poly monic(const Poly& p) {
  if (p.is_zero()) return p;
  const Scalar& lc = p.leading().coef;
  if (lc == 1) return p;
  return p.scaled(Scalar(1) / lc);
}

Scalar primitive_scale(const Poly& p) {
  if (p.is_zero()) return Scalar(1);
  mpz_class l = 1, g = 0;
  for (const auto& t : p.terms()) l = lcm(l, mpz_class(t.coef.get_den()));
  for (const auto& t : p.terms()) {
    mpz_class n = t.coef.get_num() * (l / t.coef.get_den());
    g = gcd(g, n);
  }
  Scalar s(l, g);
  s.canonicalize();
  if (p.leading().coef < 0) s = -s;
  return s;
}

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) fail(ErrorKind::ZeroDenominator, "division by the zero polynomial");
  if (a.is_zero()) return Poly();
  if (b.is_constant()) return a.scaled(Scalar(1) / b.constant_value());
  const auto& lb = b.leading();
  if (b.is_monomial()) {
    std::vector<Poly::Term> out;
    out.reserve(a.size());
    Scalar inv = Scalar(1) / lb.coef;
    for (const auto& t : a.terms()) {
      if (!lb.mono.divides(t.mono)) return std::nullopt;
      out.push_back({t.mono.divided_by(lb.mono), t.coef * inv});
    }
    return Poly::from_sorted(std::move(out));
  }
  if (a.total_degree() < b.total_degree()) return std::nullopt;
  std::vector<Poly::Term> q;
  Poly r = a;
  Poly tail = b - Poly(lb.mono, lb.coef);
  while (!r.is_zero()) {
    const auto& lr = r.leading();
    if (!lb.mono.divides(lr.mono)) return std::nullopt;
    Monomial m = lr.mono.divided_by(lb.mono);
    Scalar c = lr.coef / lb.coef;
    // Leading terms cancel exactly; subtract the rest of b.
    Poly rest = Poly::from_sorted(std::vector<Poly::Term>(r.terms().begin() + 1, r.terms().end()));
    r = rest - tail.times(m).scaled(c);
    q.push_back({std::move(m), std::move(c)});
  }
  return Poly::from_sorted(std::move(q));
}

namespace {

Poly gcd_impl(const Poly& a, const Poly& b);

Poly primitive_part(const Poly& p, const Symbol& x) {
  Poly c = content_in(p, x);
  if (c.is_constant()) return p;
  return *divide_exact(p, c);
}

Poly leading_coeff_in(const Poly& p, const Symbol& x, int d) {
  std::map<Monomial, Scalar, MonomialGreater> acc;
  for (const auto& t : p.terms())
    if (t.mono.exponent(x) == d) acc[t.mono.without(x)] += t.coef;
  return Poly::from_map(std::move(acc));
}

Poly pseudo_remainder(const Poly& a, const Poly& b, const Symbol& x) {
  int db = b.degree_in(x);
  Poly lcb = leading_coeff_in(b, x, db);
  Poly r = a;
  while (!r.is_zero()) {
    int dr = r.degree_in(x);
    if (dr < db) break;
    Poly lcr = leading_coeff_in(r, x, dr);
    r = lcb * r - (lcr * b).times(Monomial(x, dr - db));
  }
  return r;
}

Poly prs_gcd(Poly a, Poly b, const Symbol& x) {
  if (a.degree_in(x) < b.degree_in(x)) std::swap(a, b);
  while (true) {
    if (b.degree_in(x) == 0) return Poly(1);
    Poly r = pseudo_remainder(a, b, x);
    if (r.is_zero()) return b;
    a = std::move(b);
    b = primitive_part(r, x);
  }
}

Poly gcd_impl(const Poly& a, const Poly& b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant()) return Poly(1);
  if (a.is_monomial()) return Poly(Monomial::gcd(a.leading().mono, b.monomial_content()), 1);
  if (b.is_monomial()) return Poly(Monomial::gcd(b.leading().mono, a.monomial_content()), 1);

  Monomial ma = a.monomial_content();
  Monomial mb = b.monomial_content();
  Monomial mg = Monomial::gcd(ma, mb);
  Poly a1 = ma.empty() ? a : *divide_exact(a, Poly(ma, 1));
  Poly b1 = mb.empty() ? b : *divide_exact(b, Poly(mb, 1));
  Poly mono(mg, 1);

  if (monic(a1) == monic(b1)) return monic(a1) * mono;
  if (b1.size() <= a1.size()) {
    if (divide_exact(a1, b1)) return monic(b1) * mono;
  } else if (divide_exact(b1, a1)) {
    return monic(a1) * mono;
  }

  std::set<Symbol> sa = a1.symbols();
  std::set<Symbol> sb = b1.symbols();
  const Symbol* best = nullptr;
  int best_deg = 0;
  for (const auto& s : sa) {
    if (!sb.count(s)) continue;
    int d = std::max(a1.degree_in(s), b1.degree_in(s));
    if (!best || d < best_deg) {
      best = &s;
      best_deg = d;
    }
  }
  if (!best) {
    // Disjoint variables: only a common factor free of both sets could remain.
    return mono;
  }
  const Symbol x = *best;
  Poly ca = content_in(a1, x);
  Poly cb = content_in(b1, x);
  Poly pa = ca.is_constant() ? a1 : *divide_exact(a1, ca);
  Poly pb = cb.is_constant() ? b1 : *divide_exact(b1, cb);
  Poly c = gcd_impl(ca, cb);
  Poly g = prs_gcd(pa, pb, x);
  return monic(c * primitive_part(g, x) * mono);
}

}  // namespace

Poly content_in(const Poly& p, const Symbol& x) {
  auto coeffs = p.collect(x);
  std::vector<const Poly*> order;
  for (const auto& [e, c] : coeffs) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const Poly* u, const Poly* v) { return u->size() < v->size(); });
  Poly g;
  for (const Poly* c : order) {
    g = gcd_impl(g, *c);
    if (g.is_constant()) return Poly(1);
  }
  return g;
}

Poly gcd(const Poly& a, const Poly& b) { return gcd_impl(a, b); }

}  // namespace vweb
