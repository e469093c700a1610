#include "ars/expr.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace ars {
namespace detail {

enum class Op { Literal, VarX, VarY, Add, Sub, Mul, Div, Pow, Neg, Exp, Log, Sin, Cos, Sqrt };

struct ExprNode {
  Op op;
  double literal = 0.0;
  long long exponent = 0;
  std::shared_ptr<const ExprNode> lhs, rhs;
};

using NodePtr = std::shared_ptr<const ExprNode>;

namespace {

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

Jet2 eval_jet(const ExprNode& n, Point2 center, int order) {
  switch (n.op) {
    case Op::Literal: return Jet2::constant(center, order, n.literal);
    case Op::VarX: return Jet2::variable_x(center, order);
    case Op::VarY: return Jet2::variable_y(center, order);
    case Op::Add: return eval_jet(*n.lhs, center, order) + eval_jet(*n.rhs, center, order);
    case Op::Sub: return eval_jet(*n.lhs, center, order) - eval_jet(*n.rhs, center, order);
    case Op::Mul: return eval_jet(*n.lhs, center, order) * eval_jet(*n.rhs, center, order);
    case Op::Div: return eval_jet(*n.lhs, center, order) / eval_jet(*n.rhs, center, order);
    case Op::Pow: return eval_jet(*n.lhs, center, order).pow_int(n.exponent);
    case Op::Neg: return -eval_jet(*n.lhs, center, order);
    case Op::Exp: return exp(eval_jet(*n.lhs, center, order));
    case Op::Log: return log(eval_jet(*n.lhs, center, order));
    case Op::Sin: return sin(eval_jet(*n.lhs, center, order));
    case Op::Cos: return cos(eval_jet(*n.lhs, center, order));
    case Op::Sqrt: return sqrt(eval_jet(*n.lhs, center, order));
  }
  throw Error("unreachable expression op");
}

int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

void print(const ExprNode& n, std::ostream& os, int parent_prec) {
  int prec = precedence(n.op);
  bool parens = prec < parent_prec;
  if (parens) os << '(';
  switch (n.op) {
    case Op::Literal: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << n.literal;
      os << tmp.str();
      break;
    }
    case Op::VarX: os << 'x'; break;
    case Op::VarY: os << 'y'; break;
    case Op::Add: print(*n.lhs, os, prec); os << " + "; print(*n.rhs, os, prec + 1); break;
    case Op::Sub: print(*n.lhs, os, prec); os << " - "; print(*n.rhs, os, prec + 1); break;
    case Op::Mul: print(*n.lhs, os, prec); os << "*"; print(*n.rhs, os, prec + 1); break;
    case Op::Div: print(*n.lhs, os, prec); os << "/"; print(*n.rhs, os, prec + 1); break;
    case Op::Pow: print(*n.lhs, os, prec + 1); os << "^" << n.exponent; break;
    case Op::Neg: os << "-"; print(*n.lhs, os, prec); break;
    case Op::Exp: os << "exp("; print(*n.lhs, os, 0); os << ')'; break;
    case Op::Log: os << "log("; print(*n.lhs, os, 0); os << ')'; break;
    case Op::Sin: os << "sin("; print(*n.lhs, os, 0); os << ')'; break;
    case Op::Cos: os << "cos("; print(*n.lhs, os, 0); os << ')'; break;
    case Op::Sqrt: os << "sqrt("; print(*n.lhs, os, 0); os << ')'; break;
  }
  if (parens) os << ')';
}

bool equal(const ExprNode& a, const ExprNode& b) {
  if (a.op != b.op) return false;
  if (a.op == Op::Literal) return a.literal == b.literal;
  if (a.op == Op::Pow && a.exponent != b.exponent) return false;
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
  if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  if (a.lhs && !equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !equal(*a.rhs, *b.rhs)) return false;
  return true;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected input", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) lhs = make(Op::Add, lhs, parse_term());
      else if (accept('-')) lhs = make(Op::Sub, lhs, parse_term());
      else return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (accept('*')) lhs = make(Op::Mul, lhs, parse_factor());
      else if (accept('/')) lhs = make(Op::Div, lhs, parse_factor());
      else return lhs;
    }
  }

  NodePtr parse_factor() {
    if (accept('-')) return make(Op::Neg, parse_factor());
    if (accept('+')) return parse_factor();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept('^')) {
      auto n = std::make_shared<ExprNode>();
      n->op = Op::Pow;
      n->lhs = base;
      n->exponent = parse_integer_exponent();
      return n;
    }
    return base;
  }

  long long parse_integer_exponent() {
    skip_ws();
    std::size_t start = pos_;
    bool neg = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      neg = text_[pos_] == '-';
      ++pos_;
    }
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw ParseError("expected integer exponent", pos_);
    long long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == '.')
      throw ParseError("non-integer exponent", start);
    return neg ? -v : v;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_sum();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == 'e' || text_[pos_] == 'E' ||
            ((text_[pos_] == '+' || text_[pos_] == '-') && pos_ > start &&
             (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
      ++pos_;
    std::string s(text_.substr(start, pos_ - start));
    try {
      auto n = std::make_shared<ExprNode>();
      n->op = Op::Literal;
      std::size_t used = 0;
      n->literal = std::stod(s, &used);
      if (used != s.size()) throw ParseError("malformed number", start);
      return n;
    } catch (const std::invalid_argument&) {
      throw ParseError("malformed number", start);
    }
  }

  NodePtr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (name == "x") return make(Op::VarX);
    if (name == "y") return make(Op::VarY);
    Op op;
    if (name == "exp") op = Op::Exp;
    else if (name == "log") op = Op::Log;
    else if (name == "sin") op = Op::Sin;
    else if (name == "cos") op = Op::Cos;
    else if (name == "sqrt") op = Op::Sqrt;
    else throw ParseError("unknown identifier '" + name + "'", start);
    if (!accept('(')) throw ParseError("expected '(' after function name", pos_);
    NodePtr arg = parse_sum();
    if (!accept(')')) throw ParseError("expected ')'", pos_);
    return make(op, arg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace
}  // namespace detail

double FieldExpr::eval(Point2 p) const { return jet(p, 0).value(); }

Jet2 FieldExpr::jet(Point2 center, int order) const {
  if (!ast_) throw Error("empty field expression");
  return detail::eval_jet(*ast_, center, order);
}

std::string FieldExpr::pretty() const {
  if (!ast_) return "";
  std::ostringstream os;
  detail::print(*ast_, os, 0);
  return os.str();
}

bool FieldExpr::structurally_equal(const FieldExpr& other) const {
  if (!ast_ || !other.ast_) return ast_ == other.ast_;
  return detail::equal(*ast_, *other.ast_);
}

FieldExpr parse_field(std::string_view text) {
  detail::Parser parser(text);
  FieldExpr e;
  e.ast_ = parser.parse();
  e.source_ = std::string(text);
  return e;
}

}  // namespace ars
