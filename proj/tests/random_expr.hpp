#pragma once

#include <random>

#include "kummer/expr.hpp"

namespace kummer::testing {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline TermExpr random_constant(Rng& rng) {
  static const char* literals[] = {"0", "1", "2", "3", "7", "10", "0.5", "0.125", "2.75", "12"};
  return parse(literals[pick(rng, 0, 9)]);
}

inline TermExpr random_any(Rng& rng, int depth) {
  if (depth == 0 || pick(rng, 0, 9) < 2) {
    switch (pick(rng, 0, 4)) {
      case 0: return TermExpr::named(pick(rng, 0, 1) ? NamedConstant::Pi : NamedConstant::E);
      case 1:
      case 2: return TermExpr::variable();
      default: return random_constant(rng);
    }
  }
  const int kind = pick(rng, 0, 9);
  if (kind == 0) return TermExpr::negate(random_any(rng, depth - 1));
  if (kind <= 2) {
    static const Func funcs[] = {Func::Ln, Func::Log2, Func::Exp, Func::Sqrt, Func::Factorial};
    return TermExpr::call(funcs[pick(rng, 0, 4)], random_any(rng, depth - 1));
  }
  static const BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div, BinaryOp::Pow};
  return TermExpr::binary(ops[pick(rng, 0, 4)], random_any(rng, depth - 1), random_any(rng, depth - 1));
}

}  // namespace kummer::testing
