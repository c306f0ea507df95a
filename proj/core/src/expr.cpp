#include "ribau/expr.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "ribau/errors.hpp"

namespace ribau {
namespace {

using Kind = Expr::Kind;

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse() {
    skip_ws();
    if (pos_ == src_.size()) fail({"expression"});
    Expr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
    return e;
  }

 private:
  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Kind::Add, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = Expr::binary(Kind::Sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Kind::Mul, std::move(lhs), factor());
      } else if (accept('/')) {
        lhs = Expr::binary(Kind::Div, std::move(lhs), factor());
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    if (accept('-')) return Expr::unary(Kind::Neg, factor());
    return power();
  }

  Expr power() {
    Expr b = base();
    if (accept('^')) return Expr::binary(Kind::Pow, std::move(b), exponent());
    return b;
  }

  Expr exponent() {
    if (accept('-')) return Expr::unary(Kind::Neg, exponent());
    return base();
  }

  Expr base() {
    skip_ws();
    if (pos_ >= src_.size()) fail(base_expected());
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      const std::string_view word = src_.substr(start, pos_ - start);
      if (word == "u") return Expr::var_u();
      if (word == "v") return Expr::var_v();
      Kind fn;
      if (word == "sin") {
        fn = Kind::Sin;
      } else if (word == "cos") {
        fn = Kind::Cos;
      } else if (word == "exp") {
        fn = Kind::Exp;
      } else if (word == "ln") {
        fn = Kind::Ln;
      } else {
        pos_ = start;
        fail(base_expected());
      }
      expect('(');
      Expr arg = expr();
      expect(')');
      return Expr::unary(fn, std::move(arg));
    }
    fail(base_expected());
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t s = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) {
      pos_ = start;
      fail({"digit"});
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail({"exponent digit"});
    }
    const std::string text(src_.substr(start, pos_ - start));
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (!std::isfinite(value)) {
      pos_ = start;
      fail({"finite number"});
    }
    return Expr::constant(value);
  }

  static std::vector<std::string> base_expected() {
    return {"number", "'u'", "'v'", "'sin'", "'cos'", "'exp'", "'ln'", "'('"};
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail({fmt::format("'{}'", c)});
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    skip_ws();
    const std::string found =
        pos_ < src_.size() ? fmt::format("'{}'", src_[pos_]) : std::string("end of input");
    std::string list;
    for (const auto& e : expected) list += (list.empty() ? "" : ", ") + e;
    throw ParseError(fmt::format("parse error at offset {}: found {}, expected one of {{{}}}",
                                 pos_, found, list),
                     pos_, std::move(expected));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// Binding strength used by the printer.
int precedence(Kind k) {
  switch (k) {
    case Kind::Add:
    case Kind::Sub:
      return 1;
    case Kind::Mul:
    case Kind::Div:
      return 2;
    case Kind::Neg:
      return 3;
    case Kind::Pow:
      return 4;
    default:
      return 5;
  }
}

void print_into(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print_into(e, out);
  if (wrap) out += ')';
}

void print_into(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Kind::Const:
      // Shortest round-trip form; negative constants never come out of the parser.
      if (e.value < 0.0 || std::signbit(e.value)) {
        out += fmt::format("(0-{})", -e.value);
      } else {
        out += fmt::format("{}", e.value);
      }
      return;
    case Kind::VarU:
      out += 'u';
      return;
    case Kind::VarV:
      out += 'v';
      return;
    case Kind::Neg:
      out += '-';
      print_wrapped(e.args[0], precedence(e.args[0].kind) < precedence(Kind::Neg), out);
      return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      const int p = precedence(e.kind);
      print_wrapped(e.args[0], precedence(e.args[0].kind) < p, out);
      out += e.kind == Kind::Add ? "+" : e.kind == Kind::Sub ? "-" : e.kind == Kind::Mul ? "*" : "/";
      print_wrapped(e.args[1], precedence(e.args[1].kind) <= p, out);
      return;
    }
    case Kind::Pow: {
      print_wrapped(e.args[0], precedence(e.args[0].kind) <= precedence(Kind::Pow), out);
      out += '^';
      // exponent := '-' exponent | base
      const Expr* x = &e.args[1];
      while (x->kind == Kind::Neg) {
        out += '-';
        x = &x->args[0];
      }
      print_wrapped(*x, precedence(x->kind) <= precedence(Kind::Pow), out);
      return;
    }
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Exp:
    case Kind::Ln:
      out += e.kind == Kind::Sin ? "sin(" : e.kind == Kind::Cos ? "cos(" : e.kind == Kind::Exp ? "exp(" : "ln(";
      print_into(e.args[0], out);
      out += ')';
      return;
  }
}

double checked_log(double x) {
  if (!(x > 0.0)) throw DomainErrorJet("ln of a non-positive value");
  return std::log(x);
}

double checked_div(double a, double b) {
  if (!(std::abs(b) >= std::numeric_limits<double>::min())) {
    throw DivisionByZeroJet("division by a value at machine zero");
  }
  return a / b;
}

double checked_pow(double x, double p) {
  const bool integral = p == std::nearbyint(p);
  if (!integral && !(x > 0.0)) throw DomainErrorJet("non-integer power of a non-positive value");
  if (integral && p < 0.0 && !(std::abs(x) >= std::numeric_limits<double>::min())) {
    throw DivisionByZeroJet("negative power of a value at machine zero");
  }
  return std::pow(x, p);
}

}  // namespace

Expr parse_expr(std::string_view src) { return Parser(src).parse(); }

TauExpr parse_tau(std::string_view src) { return TauExpr{parse_expr(src), std::string(src)}; }

std::string print_expr(const Expr& e) {
  std::string out;
  print_into(e, out);
  return out;
}

template <class T>
T evaluate(const Expr& e, const T& u, const T& v) {
  switch (e.kind) {
    case Kind::Const:
      if constexpr (std::is_same_v<T, double>) {
        return e.value;
      } else {
        return T::constant(e.value);
      }
    case Kind::VarU:
      return u;
    case Kind::VarV:
      return v;
    case Kind::Neg:
      return -evaluate(e.args[0], u, v);
    case Kind::Add:
      return evaluate(e.args[0], u, v) + evaluate(e.args[1], u, v);
    case Kind::Sub:
      return evaluate(e.args[0], u, v) - evaluate(e.args[1], u, v);
    case Kind::Mul:
      return evaluate(e.args[0], u, v) * evaluate(e.args[1], u, v);
    case Kind::Div:
      if constexpr (std::is_same_v<T, double>) {
        return checked_div(evaluate(e.args[0], u, v), evaluate(e.args[1], u, v));
      } else {
        return evaluate(e.args[0], u, v) / evaluate(e.args[1], u, v);
      }
    case Kind::Pow: {
      const T b = evaluate(e.args[0], u, v);
      if constexpr (std::is_same_v<T, double>) {
        return checked_pow(b, evaluate(e.args[1], u, v));
      } else {
        // Constant exponents (including negated constants) go through the
        // real-power rule so negative bases with integer powers stay valid.
        const Expr* x = &e.args[1];
        double sign = 1.0;
        while (x->kind == Kind::Neg) {
          sign = -sign;
          x = &x->args[0];
        }
        if (x->kind == Kind::Const) return pow(b, sign * x->value);
        return pow(b, evaluate(e.args[1], u, v));
      }
    }
    case Kind::Sin: {
      using std::sin;
      return sin(evaluate(e.args[0], u, v));
    }
    case Kind::Cos: {
      using std::cos;
      return cos(evaluate(e.args[0], u, v));
    }
    case Kind::Exp: {
      using std::exp;
      return exp(evaluate(e.args[0], u, v));
    }
    case Kind::Ln:
      if constexpr (std::is_same_v<T, double>) {
        return checked_log(evaluate(e.args[0], u, v));
      } else {
        return log(evaluate(e.args[0], u, v));
      }
  }
  throw Error("unknown expression node");
}

template double evaluate<double>(const Expr&, const double&, const double&);
template Jet<2> evaluate<Jet<2>>(const Expr&, const Jet<2>&, const Jet<2>&);

Jet<2> evaluate_jet(const Expr& e, double u, double v) {
  return evaluate(e, Jet<2>::variable(u, 0), Jet<2>::variable(v, 1));
}

Expr random_smooth_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 10);
  std::uniform_real_distribution<double> coef(0.1, 2.0);
  switch (pick(rng)) {
    case 0:
      // Round to three decimals so printed constants stay short.
      return Expr::constant(std::round(coef(rng) * 1000.0) / 1000.0);
    case 1:
      return Expr::var_u();
    case 2:
      return Expr::var_v();
    case 3:
      return Expr::unary(Kind::Sin, random_smooth_expr(rng, depth - 1));
    case 4:
      return Expr::unary(Kind::Cos, random_smooth_expr(rng, depth - 1));
    case 5:
      return Expr::unary(Kind::Exp, Expr::unary(Kind::Sin, random_smooth_expr(rng, depth - 1)));
    case 6:
      return Expr::binary(Kind::Add, random_smooth_expr(rng, depth - 1), random_smooth_expr(rng, depth - 1));
    case 7:
      return Expr::binary(Kind::Sub, random_smooth_expr(rng, depth - 1), random_smooth_expr(rng, depth - 1));
    case 8:
      return Expr::binary(Kind::Mul, random_smooth_expr(rng, depth - 1), random_smooth_expr(rng, depth - 1));
    case 9:
      // a / (2 + cos(b)) and ln(2 + sin(b)) keep their arguments away from zero.
      return Expr::binary(
          Kind::Div, random_smooth_expr(rng, depth - 1),
          Expr::binary(Kind::Add, Expr::constant(2.0),
                       Expr::unary(Kind::Cos, random_smooth_expr(rng, depth - 1))));
    default:
      if (std::bernoulli_distribution(0.5)(rng)) {
        return Expr::unary(Kind::Ln, Expr::binary(Kind::Add, Expr::constant(2.0),
                                                  Expr::unary(Kind::Sin, random_smooth_expr(rng, depth - 1))));
      }
      return Expr::unary(Kind::Neg,
                         Expr::binary(Kind::Pow, Expr::unary(Kind::Sin, random_smooth_expr(rng, depth - 1)),
                                      Expr::constant(2.0)));
  }
}

}  // namespace ribau
