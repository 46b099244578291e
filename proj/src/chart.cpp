#include "vweb/chart.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "vweb/errors.hpp"

namespace vweb {

std::string default_label(const std::string& name) {
  std::size_t i = name.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(name[i - 1]))) --i;
  if (i == 1 && i < name.size()) return name.substr(i);
  return name;
}

Chart::Chart(std::vector<std::string> coordinates, std::vector<std::string> unknowns,
             std::vector<std::pair<std::string, int>> univariate, std::vector<std::string> labels)
    : unknowns_(std::move(unknowns)), univariate_(std::move(univariate)) {
  std::set<std::string> seen;
  for (const auto& c : coordinates) {
    if (!seen.insert(c).second) fail(ErrorKind::InvalidArgument, "duplicate coordinate " + c);
    coords_.push_back(Symbol::coordinate(c));
  }
  if (labels.empty()) {
    for (const auto& c : coordinates) labels.push_back(default_label(c));
    // colliding short labels (x1, y1) fall back to full names
    if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) labels = coordinates;
  }
  if (labels.size() != coords_.size()) fail(ErrorKind::InvalidArgument, "label count differs from dimension");
  labels_ = std::move(labels);
  for (const auto& [fn, pos] : univariate_)
    if (pos < 0 || pos >= static_cast<int>(coords_.size()))
      fail(ErrorKind::InvalidArgument, "univariate function " + fn + " outside the chart");
}

std::optional<std::size_t> Chart::position(const Symbol& s) const {
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i] == s) return i;
  return std::nullopt;
}

bool Chart::single_char_labels() const noexcept {
  return std::all_of(labels_.begin(), labels_.end(), [](const std::string& l) { return l.size() == 1; });
}

bool Chart::is_unknown(const std::string& fn) const {
  return std::find(unknowns_.begin(), unknowns_.end(), fn) != unknowns_.end();
}

int Chart::restriction(const std::string& fn) const {
  for (const auto& [name, pos] : univariate_)
    if (name == fn) return pos;
  return -1;
}

Symbol Chart::jet_symbol(const std::string& fn, MultiIndex multi) const {
  if (multi.size() != dimension()) fail(ErrorKind::ChartMismatch, "multi-index length differs from chart dimension");
  return Symbol::jet(fn, std::move(multi), restriction(fn));
}

Expr Chart::function(const std::string& fn) const { return jet(fn, MultiIndex(dimension(), 0)); }

MultiIndex Chart::multi_from_positions(const std::vector<std::size_t>& positions) const {
  MultiIndex m(dimension(), 0);
  for (std::size_t p : positions) {
    if (p >= dimension()) fail(ErrorKind::ChartMismatch, "position outside the chart");
    ++m[p];
  }
  return m;
}

Expr Chart::d(const std::string& fn, const std::vector<std::string>& labels) const {
  std::vector<std::size_t> positions;
  for (const auto& l : labels) {
    auto it = std::find(labels_.begin(), labels_.end(), l);
    if (it == labels_.end()) fail(ErrorKind::ChartMismatch, "no coordinate labelled " + l);
    positions.push_back(static_cast<std::size_t>(it - labels_.begin()));
  }
  return jet(fn, multi_from_positions(positions));
}

Expr Chart::d(const std::string& fn, const std::string& labels) const {
  std::vector<std::string> split;
  for (char c : labels) split.emplace_back(1, c);
  return d(fn, split);
}

Chart Chart::renamed(std::vector<std::string> coordinates, std::vector<std::string> labels) const {
  if (coordinates.size() != dimension()) fail(ErrorKind::ChartMismatch, "renaming changes the dimension");
  return Chart(std::move(coordinates), unknowns_, univariate_, std::move(labels));
}

Chart Chart::with_unknowns(std::vector<std::string> unknowns) const {
  Chart c = *this;
  c.unknowns_ = std::move(unknowns);
  return c;
}

bool operator==(const Chart& a, const Chart& b) {
  return a.coords_ == b.coords_ && a.unknowns_ == b.unknowns_ && a.univariate_ == b.univariate_;
}

}  // namespace vweb
