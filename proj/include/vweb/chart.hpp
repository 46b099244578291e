#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vweb/expr.hpp"

namespace vweb {

// Ordered coordinates plus the jet functions living on them. Jets are
// positional, so charts of equal dimension share jet symbols.
class Chart {
 public:
  Chart() = default;
  // univariate: function id and the single position it depends on.
  Chart(std::vector<std::string> coordinates, std::vector<std::string> unknowns,
        std::vector<std::pair<std::string, int>> univariate = {}, std::vector<std::string> labels = {});

  std::size_t dimension() const noexcept { return coords_.size(); }
  const std::vector<Symbol>& coordinates() const noexcept { return coords_; }
  const Symbol& coordinate(std::size_t i) const { return coords_.at(i); }
  std::optional<std::size_t> position(const Symbol& s) const;
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  bool single_char_labels() const noexcept;
  const std::vector<std::string>& unknowns() const noexcept { return unknowns_; }
  const std::vector<std::pair<std::string, int>>& univariate() const noexcept { return univariate_; }
  bool is_unknown(const std::string& fn) const;
  // Position a univariate function depends on, or -1.
  int restriction(const std::string& fn) const;
  bool knows_function(const std::string& fn) const { return is_unknown(fn) || restriction(fn) >= 0; }

  Expr coord(std::size_t i) const { return Expr(coords_.at(i)); }
  Symbol jet_symbol(const std::string& fn, MultiIndex multi) const;
  Expr jet(const std::string& fn, MultiIndex multi) const { return Expr(jet_symbol(fn, std::move(multi))); }
  Expr function(const std::string& fn) const;
  // Jet addressed by coordinate labels, e.g. d("f", "23") on (p1,p2,p3).
  Expr d(const std::string& fn, const std::string& labels) const;
  Expr d(const std::string& fn, const std::vector<std::string>& labels) const;
  MultiIndex multi_from_positions(const std::vector<std::size_t>& positions) const;

  // Same layout with renamed coordinates and/or unknowns.
  Chart renamed(std::vector<std::string> coordinates, std::vector<std::string> labels = {}) const;
  Chart with_unknowns(std::vector<std::string> unknowns) const;

  friend bool operator==(const Chart& a, const Chart& b);

 private:
  std::vector<Symbol> coords_;
  std::vector<std::string> labels_;
  std::vector<std::string> unknowns_;
  std::vector<std::pair<std::string, int>> univariate_;
};

// Label derived from a coordinate name: the trailing digits of p1, q0, r3,
// otherwise the whole name.
std::string default_label(const std::string& coordinate_name);

}  // namespace vweb
