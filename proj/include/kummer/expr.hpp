#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "kummer/numeric.hpp"

namespace kummer {

enum class Func { Ln, Log2, Exp, Sqrt, Factorial };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class NamedConstant { Pi, E };

std::string_view to_string(Func f);

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

namespace node {
struct Constant {
  Rational value;  // non-negative literal
};
struct Variable {};
struct Named {
  NamedConstant which;
};
struct Negate {
  ExprPtr child;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Call {
  Func func;
  ExprPtr arg;
};
}  // namespace node

struct ExprNode {
  std::variant<node::Constant, node::Variable, node::Named, node::Negate, node::Binary, node::Call> v;
};

enum class EvalMode { ExactPreferred, ForceApprox };

/// Immutable closed-form term a(n) over the index variable n.
class TermExpr {
 public:
  TermExpr() = default;
  explicit TermExpr(ExprPtr root) : root_(std::move(root)) {}

  static TermExpr constant(Rational value);
  static TermExpr variable();
  static TermExpr named(NamedConstant c);
  static TermExpr negate(const TermExpr& child);
  static TermExpr binary(BinaryOp op, const TermExpr& lhs, const TermExpr& rhs);
  static TermExpr call(Func f, const TermExpr& arg);

  const ExprPtr& root() const { return root_; }
  bool empty() const { return root_ == nullptr; }

  friend bool operator==(const TermExpr& a, const TermExpr& b);

 private:
  ExprPtr root_;
};

/// Grammar, lowest to highest precedence:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := postfix ('^' unary)?          right-associative
///   postfix := atom '!'*
///   atom    := number | 'n' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
///   func    := ln | log2 | exp | sqrt | factorial
/// Decimal literals are exact ("0.25" is 1/4). There is no implicit
/// multiplication.
TermExpr parse(std::string_view input);

/// Minimal-parenthesis rendering; parse(print(e)) == e.
std::string print(const TermExpr& e);

NumericValue eval(const TermExpr& e, std::int64_t n, EvalMode mode = EvalMode::ExactPreferred,
                  mpfr_prec_t prec = kDefaultPrecision);

/// True iff eval in ExactPreferred mode yields an exact value for every n.
bool is_exactly_evaluable(const TermExpr& e);

}  // namespace kummer
