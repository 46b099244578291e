#include "vweb/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>

#include "vweb/errors.hpp"

namespace vweb {

namespace {

struct Cursor {
  int line = 1, column = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : src_(src) {}

  NumExpr parse() {
    NumExpr e = expr();
    skip();
    if (pos_ < src_.size()) error("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

  // Source offset of every identifier node.
  const std::map<const NumNode*, std::size_t>& origins() const { return origins_; }

  Cursor cursor(std::size_t at) const {
    Cursor c;
    for (std::size_t i = 0; i < at && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++c.line;
        c.column = 1;
      } else {
        ++c.column;
      }
    }
    return c;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    Cursor c = cursor(pos_);
    throw SyntaxError(c.line, c.column, what);
  }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }

  NumExpr expr() {
    NumExpr e = term();
    while (true) {
      if (accept('+')) e = num_binary(NumNode::Op::Add, e, term());
      else if (accept('-')) e = num_binary(NumNode::Op::Sub, e, term());
      else return e;
    }
  }

  NumExpr term() {
    NumExpr e = factor();
    while (true) {
      if (accept('*')) e = num_binary(NumNode::Op::Mul, e, factor());
      else if (accept('/')) e = num_binary(NumNode::Op::Div, e, factor());
      else return e;
    }
  }

  NumExpr factor() {
    if (accept('-')) return num_unary(NumNode::Op::Neg, factor());
    NumExpr b = base();
    if (accept('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (start == pos_) error("expected an unsigned integer exponent");
      if (pos_ - start > 6) error("exponent too large");
      b = num_pow(b, std::stoi(src_.substr(start, pos_ - start)));
    }
    return b;
  }

  NumExpr base() {
    skip();
    if (pos_ >= src_.size()) error("unexpected end of input");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NumExpr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    error("unexpected '" + std::string(1, c) + "'");
  }

  NumExpr number() {
    std::size_t start = pos_;
    bool decimal = false;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      decimal = true;
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        decimal = true;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    std::string text = src_.substr(start, pos_ - start);
    if (text == ".") {
      pos_ = start;
      error("malformed number");
    }
    if (decimal) return num_const(std::stod(text));
    Scalar s(text, 10);
    return num_const(s.get_d(), s);
  }

  NumExpr identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string name = src_.substr(start, pos_ - start);
    if (name == "exp" || name == "sin" || name == "cos") {
      expect('(');
      NumExpr arg = expr();
      expect(')');
      auto op = name == "exp" ? NumNode::Op::Exp : name == "sin" ? NumNode::Op::Sin : NumNode::Op::Cos;
      return num_unary(op, arg);
    }
    if (pos_ < src_.size() && src_[pos_] == '_') {
      ++pos_;
      std::string sub;
      if (pos_ < src_.size() && src_[pos_] == '{') {
        std::size_t close = src_.find('}', pos_);
        if (close == std::string::npos) error("unterminated subscript");
        sub = src_.substr(pos_, close + 1 - pos_);
        pos_ = close + 1;
      } else {
        std::size_t s0 = pos_;
        while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        sub = src_.substr(s0, pos_ - s0);
      }
      if (sub.empty() || sub == "{}") error("empty subscript");
      name += "_" + sub;
    }
    NumExpr v = num_var(name);
    origins_[v.get()] = start;
    return v;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  std::map<const NumNode*, std::size_t> origins_;
};

bool reserved_function_name(const std::string& n) { return n == "f" || n == "H" || n == "g"; }

bool coordinate_like(const std::string& n) {
  static const std::regex re("[pqrxyz][0-9]+");
  return std::regex_match(n, re);
}

[[noreturn]] void unknown(const Parser& p, const NumNode* n, const std::string& why) {
  auto it = p.origins().find(n);
  std::string where;
  if (it != p.origins().end()) {
    Cursor c = p.cursor(it->second);
    where = " at " + std::to_string(c.line) + ":" + std::to_string(c.column);
  }
  fail(ErrorKind::UnknownIdentifier, "'" + n->name + "'" + where + ": " + why);
}

void check_numeric(const Parser& p, const NumExpr& e) {
  if (!e) return;
  if (e->op == NumNode::Op::Var) {
    if (e->name.find('_') != std::string::npos) unknown(p, e.get(), "derivatives are not allowed in closed forms");
    if (reserved_function_name(e->name)) unknown(p, e.get(), "function names cannot appear in closed forms");
  }
  check_numeric(p, e->a);
  check_numeric(p, e->b);
}

// Splits a subscript into chart labels, longest label first.
std::vector<std::string> split_labels(const std::string& sub, const Chart& chart) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < sub.size()) {
    std::size_t best = 0;
    std::string pick;
    for (std::size_t k = 0; k < chart.dimension(); ++k) {
      const std::string& l = chart.label(k);
      if (l.size() > best && sub.compare(i, l.size(), l) == 0) {
        best = l.size();
        pick = l;
      }
    }
    if (best == 0) return {};
    out.push_back(pick);
    i += best;
  }
  return out;
}

class SymbolicBuilder {
 public:
  SymbolicBuilder(const Parser& p, const Chart& c) : parser_(p), chart_(c) {}

  Expr build(const NumExpr& e) {
    using O = NumNode::Op;
    switch (e->op) {
      case O::Const:
        if (!e->exact) fail(ErrorKind::InvalidArgument, "decimal literals are not allowed in exact expressions; write a fraction");
        return Expr(*e->exact);
      case O::Var: return variable(e.get());
      case O::Sin:
      case O::Cos:
        fail(ErrorKind::TranscendentalInSymbolicContext, "sin and cos are only admitted in numeric closed forms");
      case O::Exp: return Expr::exp(build(e->a));
      case O::Neg: return -build(e->a);
      case O::Pow: return build(e->a).pow(e->exponent);
      default: break;
    }
    // Left operand first so parameters are listed in source order.
    Expr x = build(e->a);
    Expr y = build(e->b);
    switch (e->op) {
      case O::Add: return x + y;
      case O::Sub: return x - y;
      case O::Mul: return x * y;
      case O::Div: return x / y;
      default: break;
    }
    fail(ErrorKind::InvalidArgument, "unsupported node");
  }

  std::vector<std::string> parameters;

 private:
  Expr variable(const NumNode* n) {
    const std::string& name = n->name;
    if (auto us = name.find('_'); us != std::string::npos) {
      std::string fn = name.substr(0, us);
      std::string sub = name.substr(us + 1);
      if (!sub.empty() && sub.front() == '{') sub = sub.substr(1, sub.size() - 2);
      if (!chart_.knows_function(fn)) unknown(parser_, n, "not a function of this chart");
      auto labels = split_labels(sub, chart_);
      if (labels.empty()) unknown(parser_, n, "subscript does not name chart coordinates");
      return chart_.d(fn, labels);
    }
    if (chart_.knows_function(name)) return chart_.function(name);
    if (auto i = resolve_coordinate(name, chart_)) return chart_.coord(*i);
    if (reserved_function_name(name) || coordinate_like(name)) unknown(parser_, n, "not defined on this chart");
    if (std::find(parameters.begin(), parameters.end(), name) == parameters.end()) parameters.push_back(name);
    return P(name);
  }

  const Parser& parser_;
  const Chart& chart_;
};

}  // namespace

NumExpr parse_numeric(const std::string& src) {
  Parser p(src);
  NumExpr e = p.parse();
  check_numeric(p, e);
  return e;
}

Expr parse_symbolic(const std::string& src, const Chart& chart, std::vector<std::string>* parameters) {
  Parser p(src);
  NumExpr e = p.parse();
  SymbolicBuilder b(p, chart);
  Expr out = b.build(e);
  if (parameters) *parameters = b.parameters;
  return out;
}

}  // namespace vweb
