#include "iernn/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace iernn {

struct Expr::Node
{
  enum class Op { number, time, add, sub, mul, div, pow, neg, sin, cos, exp };
  Op op = Op::number;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;

  double eval(double t) const
  {
    switch (op) {
      case Op::number: return value;
      case Op::time: return t;
      case Op::add: return lhs->eval(t) + rhs->eval(t);
      case Op::sub: return lhs->eval(t) - rhs->eval(t);
      case Op::mul: return lhs->eval(t) * rhs->eval(t);
      case Op::div: return lhs->eval(t) / rhs->eval(t);
      case Op::pow: return std::pow(lhs->eval(t), rhs->eval(t));
      case Op::neg: return -lhs->eval(t);
      case Op::sin: return std::sin(lhs->eval(t));
      case Op::cos: return std::cos(lhs->eval(t));
      case Op::exp: return std::exp(lhs->eval(t));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Op = Expr::Node::Op;

NodePtr leaf(Op op, double v = 0.0)
{
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->value = v;
  return n;
}

NodePtr branch(Op op, NodePtr a, NodePtr b = nullptr)
{
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class Parser
{
public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse()
  {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) {
      fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    }
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const
  {
    throw ExprError("expression '" + s_ + "': " + msg + " at column " + std::to_string(pos_ + 1),
                    pos_ + 1);
  }

  void skip()
  {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c)
  {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr()
  {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+')) lhs = branch(Op::add, lhs, term());
      else if (eat('-')) lhs = branch(Op::sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term()
  {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*')) lhs = branch(Op::mul, lhs, unary());
      else if (eat('/')) lhs = branch(Op::div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary()
  {
    if (eat('-')) return branch(Op::neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power()
  {
    NodePtr base = primary();
    if (eat('^')) return branch(Op::pow, base, unary());
    return base;
  }

  NodePtr primary()
  {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return leaf(Op::number, v);
    }
    if (eat('(')) {
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "t") return leaf(Op::time);
      if (name == "pi") return leaf(Op::number, std::numbers::pi);
      Op fn;
      if (name == "sin") fn = Op::sin;
      else if (name == "cos") fn = Op::cos;
      else if (name == "exp") fn = Op::exp;
      else {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      if (!eat('(')) fail("expected '(' after " + name);
      NodePtr arg = expr();
      if (!eat(')')) fail("expected ')'");
      return branch(fn, arg);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr Expr::parse(const std::string& text)
{
  Expr e;
  e.root_ = Parser(text).parse();
  e.text_ = text;
  return e;
}

Expr Expr::constant(double v)
{
  Expr e;
  e.root_ = leaf(Op::number, v);
  e.text_ = std::to_string(v);
  return e;
}

double Expr::operator()(double t) const { return root_->eval(t); }

}  // namespace iernn
