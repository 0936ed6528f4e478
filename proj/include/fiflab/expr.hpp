#pragma once

// A small arithmetic expression language for user-supplied maps and moduli.
//
//   expr  := 'if' cond 'then' expr 'else' expr | sum
//   cond  := sum rel sum [rel sum]          rel: < <= > >=
//   sum   := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := ('-' | '+') unary | power
//   power := atom ['^' unary]
//   atom  := number | y | t | x | '(' expr ')' | fn '(' expr ')'
//   fn    := abs | sqrt | exp | log | min | max (min/max take two arguments)
//
// y, t and x all name the single free variable. A chained condition such as
// `if 4<=y<=5 then 2*y-8 else 0` holds when both comparisons hold.

#include <memory>
#include <string>
#include <string_view>

namespace fiflab::expr {

struct Node;

class Expression {
 public:
  /// Throws Error(ParseError) with the byte offset of the problem.
  static Expression parse(std::string_view text);

  double operator()(double v) const;
  const std::string& source() const noexcept { return source_; }

 private:
  Expression(std::shared_ptr<const Node> root, std::string source)
      : root_(std::move(root)), source_(std::move(source)) {}

  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace fiflab::expr
