#include <cctype>
#include <string>

#include "kummer/expr.hpp"

namespace kummer {

namespace {

constexpr int kMaxDepth = 512;

class Parser {
 public:
  explicit Parser(std::string_view input) : in_(input) {}

  TermExpr run() {
    skip_ws();
    if (at_end()) fail(pos_, "expression", "empty expression");
    TermExpr e = expr();
    skip_ws();
    if (!at_end()) {
      const char c = in_[pos_];
      if (c == '(' || std::isalnum(static_cast<unsigned char>(c))) {
        fail(pos_, "operator", "implicit multiplication is not supported");
      }
      fail(pos_, "operator or end of input", std::string("unexpected character '") + c + "'");
    }
    return e;
  }

 private:
  struct DepthGuard {
    explicit DepthGuard(Parser& p) : parser(p) {
      if (++parser.depth_ > kMaxDepth) {
        parser.fail(parser.pos_, "shallower expression", "expression nested too deeply");
      }
    }
    ~DepthGuard() { --parser.depth_; }
    Parser& parser;
  };

  [[noreturn]] void fail(std::size_t offset, std::string expected, const std::string& message) {
    throw ParseError(offset, std::move(expected), message + " at offset " + std::to_string(offset));
  }

  bool at_end() const { return pos_ >= in_.size(); }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(in_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (!at_end() && in_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      const std::string token(1, c);
      fail(pos_, token, "expected '" + token + "'");
    }
  }

  TermExpr expr() {
    DepthGuard guard(*this);
    TermExpr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = TermExpr::binary(BinaryOp::Add, lhs, term());
      } else if (accept('-')) {
        lhs = TermExpr::binary(BinaryOp::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  TermExpr term() {
    TermExpr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = TermExpr::binary(BinaryOp::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = TermExpr::binary(BinaryOp::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  TermExpr unary() {
    DepthGuard guard(*this);
    if (accept('-')) return TermExpr::negate(unary());
    return power();
  }

  TermExpr power() {
    TermExpr base = postfix();
    if (accept('^')) return TermExpr::binary(BinaryOp::Pow, base, unary());
    return base;
  }

  TermExpr postfix() {
    TermExpr e = atom();
    while (accept('!')) e = TermExpr::call(Func::Factorial, e);
    return e;
  }

  TermExpr atom() {
    skip_ws();
    if (at_end()) fail(pos_, "operand", "unexpected end of input");
    const char c = in_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (c == '(') {
      ++pos_;
      TermExpr inner = expr();
      expect(')');
      return inner;
    }
    fail(pos_, "operand", std::string("unexpected character '") + c + "'");
  }

  TermExpr number() {
    const std::size_t begin = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(in_[pos_]))) ++pos_;
    if (!at_end() && in_[pos_] == '.') {
      ++pos_;
      if (at_end() || !std::isdigit(static_cast<unsigned char>(in_[pos_]))) {
        fail(pos_, "digit", "expected a digit after the decimal point");
      }
      while (!at_end() && std::isdigit(static_cast<unsigned char>(in_[pos_]))) ++pos_;
    }
    return TermExpr::constant(parse_rational(in_.substr(begin, pos_ - begin)));
  }

  TermExpr identifier() {
    const std::size_t begin = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(in_[pos_])) || in_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = in_.substr(begin, pos_ - begin);
    if (name == "n") return TermExpr::variable();
    if (name == "pi") return TermExpr::named(NamedConstant::Pi);
    if (name == "e") return TermExpr::named(NamedConstant::E);
    Func f{};
    if (name == "ln") {
      f = Func::Ln;
    } else if (name == "log2") {
      f = Func::Log2;
    } else if (name == "exp") {
      f = Func::Exp;
    } else if (name == "sqrt") {
      f = Func::Sqrt;
    } else if (name == "factorial") {
      f = Func::Factorial;
    } else {
      fail(begin, "identifier", "unknown identifier '" + std::string(name) + "'");
    }
    expect('(');
    TermExpr arg = expr();
    expect(')');
    return TermExpr::call(f, arg);
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

// Precedence levels used by the printer.
constexpr int kAdditive = 1;
constexpr int kMultiplicative = 2;
constexpr int kUnary = 3;
constexpr int kPower = 4;
constexpr int kPostfix = 5;
constexpr int kAtom = 6;

int precedence(const ExprNode& n) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, node::Negate>) {
          return kUnary;
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          switch (v.op) {
            case BinaryOp::Add:
            case BinaryOp::Sub: return kAdditive;
            case BinaryOp::Mul:
            case BinaryOp::Div: return kMultiplicative;
            case BinaryOp::Pow: return kPower;
          }
          return kAtom;
        } else if constexpr (std::is_same_v<T, node::Call>) {
          return v.func == Func::Factorial ? kPostfix : kAtom;
        } else {
          return kAtom;
        }
      },
      n.v);
}

std::string print_constant(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  Integer den = q.get_den();
  unsigned twos = 0;
  unsigned fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return "(" + q.get_str() + ")";
  const unsigned places = std::max(twos, fives);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
  const Integer scaled = q.get_num() * scale / q.get_den();
  std::string digits = scaled.get_str();
  if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
  digits.insert(digits.size() - places, ".");
  return digits;
}

void print_into(const ExprNode& n, int min_prec, std::string& out);

void print_child(const ExprPtr& child, int min_prec, std::string& out) { print_into(*child, min_prec, out); }

void print_into(const ExprNode& n, int min_prec, std::string& out) {
  const bool parens = precedence(n) < min_prec;
  if (parens) out += '(';
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, node::Constant>) {
          out += print_constant(v.value);
        } else if constexpr (std::is_same_v<T, node::Variable>) {
          out += 'n';
        } else if constexpr (std::is_same_v<T, node::Named>) {
          out += v.which == NamedConstant::Pi ? "pi" : "e";
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          out += '-';
          print_child(v.child, kUnary, out);
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          switch (v.op) {
            case BinaryOp::Add:
            case BinaryOp::Sub:
              print_child(v.lhs, kAdditive, out);
              out += v.op == BinaryOp::Add ? '+' : '-';
              print_child(v.rhs, kMultiplicative, out);
              break;
            case BinaryOp::Mul:
            case BinaryOp::Div:
              print_child(v.lhs, kMultiplicative, out);
              out += v.op == BinaryOp::Mul ? '*' : '/';
              print_child(v.rhs, kUnary, out);
              break;
            case BinaryOp::Pow:
              print_child(v.lhs, kPostfix, out);
              out += '^';
              print_child(v.rhs, kUnary, out);
              break;
          }
        } else if constexpr (std::is_same_v<T, node::Call>) {
          if (v.func == Func::Factorial) {
            print_child(v.arg, kPostfix, out);
            out += '!';
          } else {
            out += to_string(v.func);
            out += '(';
            print_child(v.arg, 0, out);
            out += ')';
          }
        }
      },
      n.v);
  if (parens) out += ')';
}

}  // namespace

std::string_view to_string(Func f) {
  switch (f) {
    case Func::Ln: return "ln";
    case Func::Log2: return "log2";
    case Func::Exp: return "exp";
    case Func::Sqrt: return "sqrt";
    case Func::Factorial: return "factorial";
  }
  return "?";
}

TermExpr TermExpr::constant(Rational value) {
  if (sgn(value) < 0) throw ArgumentError("constant literals are non-negative; use negate()");
  return TermExpr(std::make_shared<const ExprNode>(ExprNode{node::Constant{std::move(value)}}));
}

TermExpr TermExpr::variable() {
  return TermExpr(std::make_shared<const ExprNode>(ExprNode{node::Variable{}}));
}

TermExpr TermExpr::named(NamedConstant c) {
  return TermExpr(std::make_shared<const ExprNode>(ExprNode{node::Named{c}}));
}

TermExpr TermExpr::negate(const TermExpr& child) {
  return TermExpr(std::make_shared<const ExprNode>(ExprNode{node::Negate{child.root()}}));
}

TermExpr TermExpr::binary(BinaryOp op, const TermExpr& lhs, const TermExpr& rhs) {
  return TermExpr(std::make_shared<const ExprNode>(ExprNode{node::Binary{op, lhs.root(), rhs.root()}}));
}

TermExpr TermExpr::call(Func f, const TermExpr& arg) {
  return TermExpr(std::make_shared<const ExprNode>(ExprNode{node::Call{f, arg.root()}}));
}

namespace {

bool same_tree(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->v.index() != b->v.index()) return false;
  return std::visit(
      [&](const auto& va) -> bool {
        using T = std::decay_t<decltype(va)>;
        const auto& vb = std::get<T>(b->v);
        if constexpr (std::is_same_v<T, node::Constant>) {
          return va.value == vb.value;
        } else if constexpr (std::is_same_v<T, node::Variable>) {
          return true;
        } else if constexpr (std::is_same_v<T, node::Named>) {
          return va.which == vb.which;
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          return same_tree(va.child, vb.child);
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          return va.op == vb.op && same_tree(va.lhs, vb.lhs) && same_tree(va.rhs, vb.rhs);
        } else {
          return va.func == vb.func && same_tree(va.arg, vb.arg);
        }
      },
      a->v);
}

}  // namespace

bool operator==(const TermExpr& a, const TermExpr& b) { return same_tree(a.root(), b.root()); }

TermExpr parse(std::string_view input) { return Parser(input).run(); }

std::string print(const TermExpr& e) {
  if (e.empty()) return {};
  std::string out;
  print_into(*e.root(), 0, out);
  return out;
}

}  // namespace kummer
