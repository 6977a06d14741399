#pragma once

#include "iernn/common.hpp"

#include <memory>
#include <string>

namespace iernn {

/// Scalar expression of time t. Grammar:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?
///   primary := number | 't' | 'pi' | fn '(' expr ')' | '(' expr ')'
///   fn      := sin | cos | exp
class Expr
{
public:
  struct Node;

  /// Throws ExprError with the column of the first offending character.
  static Expr parse(const std::string& text);
  static Expr constant(double v);

  double operator()(double t) const;
  const std::string& text() const { return text_; }

private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

class ExprError : public ConfigError
{
public:
  ExprError(const std::string& what, std::size_t column)
  : ConfigError(what), column_(column)
  {}
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t column_;
};

}  // namespace iernn
