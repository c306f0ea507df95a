#pragma once

/// \file
/// Scalar expression language over the chart parameters u, v.
///
/// Grammar (whitespace insignificant):
///
///     expr     := term (('+' | '-') term)*
///     term     := factor (('*' | '/') factor)*
///     factor   := '-' factor | power
///     power    := base ('^' exponent)?
///     exponent := '-' exponent | base
///     base     := number | 'u' | 'v' | fn '(' expr ')' | '(' expr ')'
///     fn       := 'sin' | 'cos' | 'exp' | 'ln'
///     number   := digits ('.' digits?)? (('e' | 'E') ('+' | '-')? digits)?
///               | '.' digits (('e' | 'E') ('+' | '-')? digits)?
///
/// Precedence is '^' over unary minus over '*' '/' over '+' '-'; binary
/// operators other than '^' associate to the left, '^' does not chain.
/// So -u^2 is -(u^2) and 2^-1 is 2^(-1).

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ribau/jet.hpp"

namespace ribau {

struct Expr {
  enum class Kind : std::uint8_t { Const, VarU, VarV, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Ln };

  Kind kind = Kind::Const;
  double value = 0.0;  // Const only
  std::vector<Expr> args;

  static Expr constant(double c) { return Expr{Kind::Const, c, {}}; }
  static Expr var_u() { return Expr{Kind::VarU, 0.0, {}}; }
  static Expr var_v() { return Expr{Kind::VarV, 0.0, {}}; }
  static Expr unary(Kind k, Expr a) { return Expr{k, 0.0, {std::move(a)}}; }
  static Expr binary(Kind k, Expr a, Expr b) { return Expr{k, 0.0, {std::move(a), std::move(b)}}; }

  friend bool operator==(const Expr&, const Expr&) = default;
};

/// A parsed representative function tau together with its source text.
struct TauExpr {
  Expr ast;
  std::string source;
};

/// Throws ParseError carrying the byte offset and the expected-token set.
Expr parse_expr(std::string_view src);
TauExpr parse_tau(std::string_view src);

/// Minimal-parenthesis rendering; parse_expr(print_expr(e)) == e for every
/// AST the parser can produce.
std::string print_expr(const Expr& e);

/// Evaluates e at (u, v). Instantiated for double and Jet<2>; domain
/// violations raise DomainErrorJet / DivisionByZeroJet in both.
template <class T>
T evaluate(const Expr& e, const T& u, const T& v);

/// Jet of e at (u, v) seeded with u, v as the two coordinates.
Jet<2> evaluate_jet(const Expr& e, double u, double v);

/// Random expression that is smooth and finite on all of R^2: divisions and
/// logarithms are only generated with arguments bounded away from zero.
Expr random_smooth_expr(std::mt19937_64& rng, int depth);

}  // namespace ribau
