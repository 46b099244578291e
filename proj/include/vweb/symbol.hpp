#pragma once

#include <compare>
#include <memory>
#include <string>
#include <vector>

namespace vweb {

class Expr;

// Derivative counts per chart position; f_12 and f_21 share one index.
using MultiIndex = std::vector<int>;

// Global order used by the monomial order: coordinates first, jets last.
enum class SymbolKind : char { Coordinate = 0, Parameter = 1, ExpAtom = 2, Jet = 3 };

class Symbol {
 public:
  static Symbol coordinate(const std::string& name);
  static Symbol parameter(const std::string& name);
  static Symbol exp_atom(const Expr& argument);
  // only >= 0 restricts the function to one chart position (lambda_i(p_i)).
  static Symbol jet(const std::string& function, MultiIndex multi, int only = -1);

  SymbolKind kind() const noexcept;
  const std::string& name() const noexcept;
  const MultiIndex& multi() const noexcept;
  int only() const noexcept;
  int order() const noexcept;
  const Expr& argument() const;
  const std::string& key() const noexcept;

  bool is_jet() const noexcept { return kind() == SymbolKind::Jet; }
  bool is_atom() const noexcept { return kind() == SymbolKind::ExpAtom; }
  // Jets, and atoms whose argument mentions a jet.
  bool involves_jets() const noexcept;
  // True if this symbol is s or an atom whose argument mentions s.
  bool mentions(const Symbol& s) const;

  // Jet with one more derivative at position i.
  Symbol raised(std::size_t i) const;
  Symbol with_multi(MultiIndex multi) const;

  friend bool operator==(const Symbol& a, const Symbol& b) noexcept;
  friend std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) noexcept;

 private:
  struct Data;
  explicit Symbol(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

}  // namespace vweb
