#include "doctest.h"
#include "kummer/expr.hpp"

using namespace kummer;

namespace {

TermExpr c(long v) { return TermExpr::constant(Rational(v)); }
TermExpr n() { return TermExpr::variable(); }
TermExpr bin(BinaryOp op, const TermExpr& a, const TermExpr& b) { return TermExpr::binary(op, a, b); }

std::size_t error_offset(const char* text) {
  try {
    (void)parse(text);
  } catch (const ParseError& e) {
    return e.offset();
  }
  FAIL("expected a parse error for " << text);
  return 0;
}

}  // namespace

TEST_CASE("grammar-forced shapes") {
  CHECK(parse("1/n^2") == bin(BinaryOp::Div, c(1), bin(BinaryOp::Pow, n(), c(2))));
  CHECK(parse("(n+1)/2^n") ==
        bin(BinaryOp::Div, bin(BinaryOp::Add, n(), c(1)), bin(BinaryOp::Pow, c(2), n())));
  CHECK(parse("-n^2") == TermExpr::negate(bin(BinaryOp::Pow, n(), c(2))));
  CHECK(parse("2^-n") == bin(BinaryOp::Pow, c(2), TermExpr::negate(n())));
  CHECK(parse("n!^2") == bin(BinaryOp::Pow, TermExpr::call(Func::Factorial, n()), c(2)));
  CHECK(parse("factorial(n)") == parse("n!"));
  CHECK(parse("1-2-3") == bin(BinaryOp::Sub, bin(BinaryOp::Sub, c(1), c(2)), c(3)));
  CHECK(parse("pi*e") == bin(BinaryOp::Mul, TermExpr::named(NamedConstant::Pi), TermExpr::named(NamedConstant::E)));
}

TEST_CASE("precedence and associativity") {
  CHECK(identical(eval(parse("1+2*3"), 1), NumericValue(7)));
  CHECK(identical(eval(parse("2^3^2"), 1), NumericValue(512)));
  CHECK(identical(eval(parse("(2^3)^2"), 1), NumericValue(64)));
  CHECK(identical(eval(parse("12/3/2"), 1), NumericValue(2)));
  CHECK(identical(eval(parse("-2^2"), 1), NumericValue(-4)));
  CHECK(identical(eval(parse("3!!"), 1), NumericValue(720)));
}

TEST_CASE("decimal literals are exact") {
  CHECK(parse("0.5") == TermExpr::constant(Rational(1, 2)));
  CHECK(eval(parse("n^0.5"), 4).is_approx());
  CHECK(overlaps(eval(parse("n^0.5"), 4), NumericValue(2)));
}

TEST_CASE("malformed input yields positioned errors") {
  CHECK(error_offset("1/(n") == 4);
  try {
    (void)parse("1/(n");
  } catch (const ParseError& e) {
    CHECK(e.expected() == ")");
  }
  CHECK(error_offset("") == 0);
  CHECK(error_offset("n+") == 2);
  CHECK(error_offset("2n") == 1);
  CHECK(error_offset("foo(n)") == 0);
  CHECK(error_offset("ln n") == 3);
  CHECK(error_offset("n)") == 1);
  CHECK(error_offset("1.") == 2);
  CHECK(error_offset("n^") == 2);
  CHECK(error_offset("n $ 2") == 2);
  CHECK_THROWS_WITH_AS(parse("x"), doctest::Contains("unknown identifier"), ParseError);
  CHECK_THROWS_WITH_AS(parse("2n"), doctest::Contains("implicit multiplication"), ParseError);
}

TEST_CASE("error offsets stay within the input") {
  for (const char* bad : {"(", "((n)", "n**2", "1/", "sqrt()", "ln(", "n!(", "e^", "*n", "1 2"}) {
    const std::size_t off = error_offset(bad);
    CHECK(off <= std::string_view(bad).size());
  }
}

TEST_CASE("eval examples") {
  CHECK(identical(eval(parse("1/n^2"), 3), NumericValue(1, 9)));
  CHECK(identical(eval(parse("(n+1)/2^n"), 2), NumericValue(3, 4)));
  const NumericValue v = eval(parse("1/(n*ln(n+1))"), 1);
  REQUIRE(v.is_approx());
  // 1/ln 2 = 1.44269504088896340735992468100... (independent value)
  const NumericValue ref(Rational("144269504088896340735992468/100000000000000000000000000"));
  const NumericValue tol(Rational(1, 1000000) * Rational(1, 1000000) * Rational(1, 1000000000000));
  CHECK(cmp_lt(v - ref, tol) == TriBool::True);
  CHECK(cmp_gt(v - ref, -tol) == TriBool::True);
  CHECK(v.to_double() == doctest::Approx(1.4426950408889634));
  CHECK(mpfr_get_d(v.interval().radius.get(), MPFR_RNDU) < 1e-30);
  CHECK(eval(parse("1/n"), 5, EvalMode::ForceApprox).is_approx());
}

TEST_CASE("eval domain errors") {
  CHECK_THROWS_AS(eval(parse("1/(n-1)"), 1), DomainError);
  CHECK_THROWS_AS(eval(parse("ln(n-1)"), 1), DomainError);
  CHECK_THROWS_AS(eval(parse("sqrt(1-n)"), 5), DomainError);
  CHECK_THROWS_AS(eval(parse("(n/2)!"), 3), DomainError);
}

TEST_CASE("is_exactly_evaluable") {
  CHECK(is_exactly_evaluable(parse("1/n^2")));
  CHECK_FALSE(is_exactly_evaluable(parse("1/(n*ln(n+1))")));
  CHECK(is_exactly_evaluable(parse("n!/n^n")));
  CHECK_FALSE(is_exactly_evaluable(parse("1/n^0.5")));
  CHECK_FALSE(is_exactly_evaluable(parse("pi/n^2")));
  CHECK(is_exactly_evaluable(parse("n^(2+1)/(n-1)^-2")));
  CHECK(is_exactly_evaluable(parse("n^(3/3)")));
  CHECK(is_exactly_evaluable(parse("(n/2)!")));
  CHECK_FALSE(is_exactly_evaluable(parse("n^(n/2)")));
  CHECK_FALSE(is_exactly_evaluable(parse("2^(1/2)")));
}

TEST_CASE("print round trip on the corpus shapes") {
  for (const char* s : {"1/2^n", "(2/3)^n", "n/3^n", "1/n^(3/2)", "1/(n*(n+1))", "(n+1)/n^3",
                        "1/(2*n-1)", "n/(n^2+1)", "1/(n*ln(n+1)^2)", "1/n!", "n!^2/(2*n)!",
                        "4^n*n!^2/(2*n+1)!", "2^3^2", "(2^3)^2", "-(-n)", "1-(2-3)", "(-n)!",
                        "0.125*n", "e^-n", "sqrt(n)^-1"}) {
    const TermExpr e = parse(s);
    CAPTURE(s);
    CAPTURE(print(e));
    CHECK(parse(print(e)) == e);
  }
  CHECK(print(parse("((1))/((n)^(2))")) == "1/n^2");
  CHECK(print(parse("0.25")) == "0.25");
  CHECK(print(parse("1/3*n")) == "1/3*n");
}
