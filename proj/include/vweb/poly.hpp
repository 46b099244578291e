#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vweb/scalar.hpp"
#include "vweb/symbol.hpp"

namespace vweb {

class Monomial {
 public:
  using Factor = std::pair<Symbol, int>;

  Monomial() = default;
  explicit Monomial(const Symbol& s, int exponent = 1);
  static Monomial from_factors(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  int degree() const noexcept { return degree_; }
  bool empty() const noexcept { return factors_.empty(); }
  int exponent(const Symbol& s) const;
  bool divides(const Monomial& other) const;
  Monomial divided_by(const Monomial& other) const;
  Monomial without(const Symbol& s) const;
  bool involves_jets() const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) noexcept;
  static Monomial gcd(const Monomial& a, const Monomial& b);

 private:
  std::vector<Factor> factors_;  // ascending symbol order, positive exponents
  int degree_ = 0;
};

// Degree-lexicographic comparison: negative, zero or positive.
int compare(const Monomial& a, const Monomial& b) noexcept;

struct MonomialGreater {
  bool operator()(const Monomial& a, const Monomial& b) const noexcept {
    return compare(a, b) > 0;
  }
};

class Poly {
 public:
  struct Term {
    Monomial mono;
    Scalar coef;
  };

  Poly() = default;
  Poly(const Scalar& c);  // NOLINT(google-explicit-constructor)
  Poly(long c) : Poly(Scalar(c)) {}  // NOLINT(google-explicit-constructor)
  explicit Poly(const Symbol& s, int exponent = 1);
  Poly(const Monomial& m, const Scalar& c);
  static Poly from_map(std::map<Monomial, Scalar, MonomialGreater>&& acc);
  // Precondition: strictly descending monomials, nonzero coefficients.
  static Poly from_sorted(std::vector<Term>&& terms);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  bool is_monomial() const noexcept { return terms_.size() == 1; }
  bool is_one() const noexcept;
  Scalar constant_value() const;  // coefficient of the empty monomial
  const Term& leading() const { return terms_.front(); }
  int total_degree() const noexcept;

  std::set<Symbol> symbols() const;
  bool involves_jets() const;
  bool mentions(const Symbol& s) const;
  int degree_in(const Symbol& x) const;
  // Coefficients of powers of x (each free of x).
  std::map<int, Poly> collect(const Symbol& x) const;
  // Lowest exponent of every symbol across all terms.
  Monomial monomial_content() const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly scaled(const Scalar& c) const;
  Poly times(const Monomial& m) const;
  Poly pow(int n) const;
  // Partial derivative treating every symbol as independent.
  Poly partial(const Symbol& x) const;

  friend bool operator==(const Poly& a, const Poly& b) noexcept;

 private:
  std::vector<Term> terms_;  // strictly descending monomials, nonzero coefficients
};

Poly operator*(const Scalar& c, const Poly& p);

// Exact quotient a/b, or nullopt when b does not divide a.
std::optional<Poly> divide_exact(const Poly& a, const Poly& b);
// Monic gcd over Q (leading coefficient 1); gcd(0,0) = 0.
Poly gcd(const Poly& a, const Poly& b);
// gcd of p's coefficients when viewed as a polynomial in x.
Poly content_in(const Poly& p, const Symbol& x);
// Divide out the leading coefficient.
Poly monic(const Poly& p);
// Rational factor making p integral with coprime coefficients and positive leading coefficient.
Scalar primitive_scale(const Poly& p);

}  // namespace vweb
