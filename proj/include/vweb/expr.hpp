#pragma once

#include <functional>
#include <set>
#include <string>

#include "vweb/poly.hpp"

namespace vweb {

class Chart;

// Canonical rational function: numerator over a jet-free denominator with
// gcd 1, the denominator primitive over Z with positive leading coefficient.
class Expr {
 public:
  Expr() = default;
  Expr(const Scalar& c) : num_(c) {}  // NOLINT(google-explicit-constructor)
  Expr(long c) : num_(Scalar(c)) {}   // NOLINT(google-explicit-constructor)
  Expr(int c) : num_(Scalar(c)) {}    // NOLINT(google-explicit-constructor)
  explicit Expr(const Symbol& s) : num_(s) {}
  explicit Expr(const Poly& p) : num_(p) {}

  // Normalizes; throws ZeroDenominator / JetInDenominator.
  static Expr fraction(const Poly& num, const Poly& den);
  static Expr exp(const Expr& argument);
  static Expr rational(long num, long den) { return Expr(make_scalar(num, den)); }

  const Poly& numerator() const noexcept { return num_; }
  const Poly& denominator() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const noexcept { return den_.is_one(); }
  bool is_constant() const noexcept { return num_.is_constant() && den_.is_one(); }
  Scalar constant_value() const;
  bool involves_jets() const { return num_.involves_jets(); }
  bool mentions(const Symbol& s) const { return num_.mentions(s) || den_.mentions(s); }
  std::set<Symbol> symbols() const;
  std::set<Symbol> jets() const;

  Expr operator-() const;
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  Expr& operator/=(const Expr& o) { return *this = *this / o; }
  Expr pow(int n) const;

  friend bool operator==(const Expr& a, const Expr& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  // num and den already coprime; only the scalar normalization is applied.
  static Expr from_coprime(const Poly& num, const Poly& den);

  Poly num_;
  Poly den_ = Poly(1);
};

// Canonical form of an arbitrary numerator/denominator pair.
inline Expr normalize(const Poly& num, const Poly& den) { return Expr::fraction(num, den); }
inline bool is_zero(const Expr& e) { return e.is_zero(); }

// Renders with the chart's labels for jet subscripts when given.
std::string render(const Expr& e, const Chart* chart = nullptr);
std::string render(const Poly& p, const Chart* chart = nullptr);
std::string render(const Symbol& s, const Chart* chart = nullptr);

// Numeric evaluation; value(s) supplies every symbol except atoms.
double evaluate(const Expr& e, const std::function<double(const Symbol&)>& value);

}  // namespace vweb
