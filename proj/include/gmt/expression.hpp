#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "gmt/error.hpp"
#include "gmt/numeric.hpp"

namespace gmt {

/// Arithmetic expression in x, y, z compiled to a small tree.
///
/// Grammar (usual precedence, ^ right-associative and binding tighter than
/// unary minus):
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('+' | '-') unary | power
///   power  := atom ('^' unary)?
///   atom   := number | x | y | z | pi | call | '(' expr ')'
///   call   := (abs | exp | sqrt) '(' expr ')' | (min | max) '(' expr ',' expr ')'
class Expression {
 public:
  explicit Expression(std::string source) : source_(std::move(source)) {
    pos_ = 0;
    root_ = parse_expr();
    skip_space();
    if (pos_ != source_.size()) fail("unexpected '" + std::string(1, source_[pos_]) + "'");
  }

  double operator()(const Vec& p) const { return eval(*root_, p); }
  const std::string& source() const { return source_; }

 private:
  enum class Op { number, var, neg, add, sub, mul, div, pow, abs, exp, sqrt, min, max };

  struct Node {
    Op op;
    double value = 0.0;
    int var = 0;
    std::unique_ptr<Node> lhs, rhs;
  };
  using NodePtr = std::unique_ptr<Node>;

  static NodePtr leaf(Op op, double value = 0.0, int var = 0) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->value = value;
    n->var = var;
    return n;
  }
  static NodePtr node(Op op, NodePtr lhs, NodePtr rhs = nullptr) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::parse, "expression '" + source_ + "' at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_space() {
    while (pos_ < source_.size() && std::isspace(static_cast<unsigned char>(source_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < source_.size() && source_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (true) {
      if (accept('+')) lhs = node(Op::add, std::move(lhs), parse_term());
      else if (accept('-')) lhs = node(Op::sub, std::move(lhs), parse_term());
      else return lhs;
    }
  }
  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    while (true) {
      if (accept('*')) lhs = node(Op::mul, std::move(lhs), parse_unary());
      else if (accept('/')) lhs = node(Op::div, std::move(lhs), parse_unary());
      else return lhs;
    }
  }
  NodePtr parse_unary() {
    if (accept('-')) return node(Op::neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }
  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept('^')) return node(Op::pow, std::move(base), parse_unary());
    return base;
  }
  NodePtr parse_atom() {
    skip_space();
    if (pos_ >= source_.size()) fail("unexpected end of expression");
    const char c = source_[pos_];
    if (accept('(')) {
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = source_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return leaf(Op::number, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < source_.size() && (std::isalnum(static_cast<unsigned char>(source_[pos_])) || source_[pos_] == '_')) ++pos_;
      const std::string name = source_.substr(start, pos_ - start);
      if (name == "x") return leaf(Op::var, 0.0, 0);
      if (name == "y") return leaf(Op::var, 0.0, 1);
      if (name == "z") return leaf(Op::var, 0.0, 2);
      if (name == "pi") return leaf(Op::number, std::numbers::pi);
      Op op;
      int arity = 1;
      if (name == "abs") op = Op::abs;
      else if (name == "exp") op = Op::exp;
      else if (name == "sqrt") op = Op::sqrt;
      else if (name == "min") op = Op::min, arity = 2;
      else if (name == "max") op = Op::max, arity = 2;
      else {
        pos_ = start;
        fail("unknown name '" + name + "'");
      }
      expect('(');
      NodePtr a = parse_expr();
      NodePtr b;
      if (arity == 2) {
        expect(',');
        b = parse_expr();
      }
      expect(')');
      return node(op, std::move(a), std::move(b));
    }
    fail(std::string("unexpected '") + c + "'");
  }

  static double eval(const Node& n, const Vec& p) {
    switch (n.op) {
      case Op::number: return n.value;
      case Op::var: return p[n.var];
      case Op::neg: return -eval(*n.lhs, p);
      case Op::add: return eval(*n.lhs, p) + eval(*n.rhs, p);
      case Op::sub: return eval(*n.lhs, p) - eval(*n.rhs, p);
      case Op::mul: return eval(*n.lhs, p) * eval(*n.rhs, p);
      case Op::div: return eval(*n.lhs, p) / eval(*n.rhs, p);
      case Op::pow: return std::pow(eval(*n.lhs, p), eval(*n.rhs, p));
      case Op::abs: return std::abs(eval(*n.lhs, p));
      case Op::exp: return std::exp(eval(*n.lhs, p));
      case Op::sqrt: return std::sqrt(eval(*n.lhs, p));
      case Op::min: return std::min(eval(*n.lhs, p), eval(*n.rhs, p));
      case Op::max: return std::max(eval(*n.lhs, p), eval(*n.rhs, p));
    }
    return 0.0;
  }

  std::string source_;
  std::size_t pos_ = 0;
  std::shared_ptr<const Node> root_;
};

}  // namespace gmt
