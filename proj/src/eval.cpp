#include <optional>

#include "kummer/expr.hpp"

namespace kummer {

namespace {

struct Evaluator {
  std::int64_t n;
  EvalMode mode;
  mpfr_prec_t prec;

  NumericValue literal(const Rational& q) const {
    NumericValue v(q);
    return mode == EvalMode::ForceApprox ? NumericValue::to_approx(v, prec) : v;
  }

  NumericValue operator()(const ExprNode& e) const {
    return std::visit(
        [&](const auto& v) -> NumericValue {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, node::Constant>) {
            return literal(v.value);
          } else if constexpr (std::is_same_v<T, node::Variable>) {
            return literal(Rational(static_cast<long>(n)));
          } else if constexpr (std::is_same_v<T, node::Named>) {
            return v.which == NamedConstant::Pi ? pi(prec) : euler_e(prec);
          } else if constexpr (std::is_same_v<T, node::Negate>) {
            return -(*this)(*v.child);
          } else if constexpr (std::is_same_v<T, node::Binary>) {
            const NumericValue lhs = (*this)(*v.lhs);
            const NumericValue rhs = (*this)(*v.rhs);
            switch (v.op) {
              case BinaryOp::Add: return lhs + rhs;
              case BinaryOp::Sub: return lhs - rhs;
              case BinaryOp::Mul: return lhs * rhs;
              case BinaryOp::Div: return lhs / rhs;
              case BinaryOp::Pow: return pow(lhs, rhs, prec);
            }
            return lhs;
          } else {
            const NumericValue arg = (*this)(*v.arg);
            switch (v.func) {
              case Func::Ln: return ln(arg, prec);
              case Func::Log2: return log2(arg, prec);
              case Func::Exp: return exp(arg, prec);
              case Func::Sqrt: return sqrt(arg, prec);
              case Func::Factorial: return factorial(arg, prec);
            }
            return arg;
          }
        },
        e.v);
  }
};

// Integer-valued for every n >= 1, and never negative.
bool nonnegative_integer_valued(const ExprNode& e);
bool exact_node(const ExprNode& e);

bool has_variable(const ExprNode& e) {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, node::Variable>) {
          return true;
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          return has_variable(*v.child);
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          return has_variable(*v.lhs) || has_variable(*v.rhs);
        } else if constexpr (std::is_same_v<T, node::Call>) {
          return has_variable(*v.arg);
        } else {
          return false;
        }
      },
      e.v);
}

// Value of an exact subtree free of n, if it evaluates without error.
std::optional<Rational> folded_constant(const ExprNode& e) {
  if (has_variable(e) || !exact_node(e)) return std::nullopt;
  try {
    const NumericValue v = Evaluator{1, EvalMode::ExactPreferred, kDefaultPrecision}(e);
    if (v.is_exact()) return v.exact_value();
  } catch (const Error&) {
  }
  return std::nullopt;
}

bool integer_valued(const ExprNode& e) {
  if (const auto c = folded_constant(e)) return c->get_den() == 1;
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, node::Constant>) {
          return v.value.get_den() == 1;
        } else if constexpr (std::is_same_v<T, node::Variable>) {
          return true;
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          return integer_valued(*v.child);
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          switch (v.op) {
            case BinaryOp::Add:
            case BinaryOp::Sub:
            case BinaryOp::Mul: return integer_valued(*v.lhs) && integer_valued(*v.rhs);
            case BinaryOp::Pow: return integer_valued(*v.lhs) && nonnegative_integer_valued(*v.rhs);
            case BinaryOp::Div: return false;
          }
          return false;
        } else if constexpr (std::is_same_v<T, node::Call>) {
          return v.func == Func::Factorial && integer_valued(*v.arg);
        } else {
          return false;
        }
      },
      e.v);
}

bool nonnegative_integer_valued(const ExprNode& e) {
  if (const auto c = folded_constant(e)) return c->get_den() == 1 && sgn(*c) >= 0;
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, node::Constant>) {
          return v.value.get_den() == 1;
        } else if constexpr (std::is_same_v<T, node::Variable>) {
          return true;
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          switch (v.op) {
            case BinaryOp::Add:
            case BinaryOp::Mul:
            case BinaryOp::Pow:
              return nonnegative_integer_valued(*v.lhs) && nonnegative_integer_valued(*v.rhs);
            default: return false;
          }
        } else if constexpr (std::is_same_v<T, node::Call>) {
          return v.func == Func::Factorial && integer_valued(*v.arg);
        } else {
          return false;
        }
      },
      e.v);
}

bool exact_node(const ExprNode& e) {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, node::Constant> || std::is_same_v<T, node::Variable>) {
          return true;
        } else if constexpr (std::is_same_v<T, node::Named>) {
          return false;
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          return exact_node(*v.child);
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          if (v.op == BinaryOp::Pow) return exact_node(*v.lhs) && integer_valued(*v.rhs);
          return exact_node(*v.lhs) && exact_node(*v.rhs);
        } else {
          // factorial is exact or a domain error for an exact argument
          return v.func == Func::Factorial && exact_node(*v.arg);
        }
      },
      e.v);
}

}  // namespace

NumericValue eval(const TermExpr& e, std::int64_t n, EvalMode mode, mpfr_prec_t prec) {
  if (e.empty()) throw ArgumentError("empty expression");
  if (n < 1) throw ArgumentError("index must be positive");
  if (prec < MPFR_PREC_MIN) throw ArgumentError("precision too small");
  return Evaluator{n, mode, prec}(*e.root());
}

bool is_exactly_evaluable(const TermExpr& e) { return !e.empty() && exact_node(*e.root()); }

}  // namespace kummer
