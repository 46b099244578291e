#include "vweb/symbol.hpp"

#include <numeric>

#include "vweb/errors.hpp"
#include "vweb/expr.hpp"

namespace vweb {

struct Symbol::Data {
  SymbolKind kind;
  std::string name;
  MultiIndex multi;
  int only = -1;
  std::shared_ptr<const Expr> arg;
  std::string key;
  bool jets = false;
};

namespace {

std::string jet_key(const std::string& fn, const MultiIndex& multi, int only) {
  std::string k(1, '3');
  k += fn;
  k += '\x01';
  for (int c : multi) k += static_cast<char>(c + 2);
  k += '\x01';
  k += static_cast<char>(only + 2);
  return k;
}

}  // namespace

Symbol Symbol::coordinate(const std::string& name) {
  auto d = std::make_shared<Data>();
  d->kind = SymbolKind::Coordinate;
  d->name = name;
  d->key = "0" + name;
  return Symbol(std::move(d));
}

Symbol Symbol::parameter(const std::string& name) {
  auto d = std::make_shared<Data>();
  d->kind = SymbolKind::Parameter;
  d->name = name;
  d->key = "1" + name;
  return Symbol(std::move(d));
}

Symbol Symbol::exp_atom(const Expr& argument) {
  auto d = std::make_shared<Data>();
  d->kind = SymbolKind::ExpAtom;
  d->arg = std::make_shared<const Expr>(argument);
  d->name = "exp(" + render(argument) + ")";
  d->key = "2" + render(argument);
  d->jets = argument.involves_jets() || argument.denominator().involves_jets();
  return Symbol(std::move(d));
}

Symbol Symbol::jet(const std::string& function, MultiIndex multi, int only) {
  for (std::size_t i = 0; i < multi.size(); ++i) {
    if (multi[i] < 0) fail(ErrorKind::InvalidArgument, "negative derivative count");
    if (only >= 0 && static_cast<int>(i) != only && multi[i] != 0)
      fail(ErrorKind::InvalidArgument, function + " depends on one coordinate only");
  }
  auto d = std::make_shared<Data>();
  d->kind = SymbolKind::Jet;
  d->name = function;
  d->key = jet_key(function, multi, only);
  d->multi = std::move(multi);
  d->only = only;
  d->jets = true;
  return Symbol(std::move(d));
}

SymbolKind Symbol::kind() const noexcept { return d_->kind; }
const std::string& Symbol::name() const noexcept { return d_->name; }
const MultiIndex& Symbol::multi() const noexcept { return d_->multi; }
int Symbol::only() const noexcept { return d_->only; }
int Symbol::order() const noexcept {
  return std::accumulate(d_->multi.begin(), d_->multi.end(), 0);
}
const std::string& Symbol::key() const noexcept { return d_->key; }
bool Symbol::involves_jets() const noexcept { return d_->jets; }

const Expr& Symbol::argument() const {
  if (!d_->arg) fail(ErrorKind::InvalidArgument, "symbol " + d_->name + " is not an atom");
  return *d_->arg;
}

bool Symbol::mentions(const Symbol& s) const {
  if (*this == s) return true;
  if (d_->arg) return d_->arg->mentions(s);
  return false;
}

Symbol Symbol::raised(std::size_t i) const {
  if (!is_jet() || i >= d_->multi.size()) fail(ErrorKind::InvalidArgument, "cannot raise " + d_->name);
  MultiIndex m = d_->multi;
  ++m[i];
  return jet(d_->name, std::move(m), d_->only);
}

Symbol Symbol::with_multi(MultiIndex multi) const { return jet(d_->name, std::move(multi), d_->only); }

bool operator==(const Symbol& a, const Symbol& b) noexcept {
  return a.d_ == b.d_ || a.d_->key == b.d_->key;
}

std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) noexcept {
  if (a.d_ == b.d_) return std::strong_ordering::equal;
  int c = a.d_->key.compare(b.d_->key);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace vweb
