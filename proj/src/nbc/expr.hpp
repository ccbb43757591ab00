#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nbc/errors.hpp"
#include "nbc/jet.hpp"

namespace nbc {

// --- tokens ----------------------------------------------------------------

enum class TokenKind { number, identifier, op, paren, comma };

struct Token {
  TokenKind kind;
  std::string lexeme;
  std::size_t position;  // 0-based character offset into the source
};

// Splits the source into tokens (no end-of-input marker is appended).
// Throws Error{lex} with the offending position on an unexpected character.
std::vector<Token> tokenize(std::string_view src);

// --- syntax trees ----------------------------------------------------------

enum class AstKind {
  constant,
  variable,
  negate,
  add,
  subtract,
  multiply,
  divide,
  power,
  call,
};

enum class Func { sin, cos, sinh, cosh, exp, sqrt, ln };

const char* func_name(Func f);

struct Ast;
using AstPtr = std::shared_ptr<const Ast>;

struct Ast {
  AstKind kind;
  double number = 0.0;    // constant
  std::string name;       // variable name
  Func func = Func::sin;  // call
  AstPtr a, b;            // operands (negate/call use only a)
};

AstPtr make_constant(double v);
AstPtr make_variable(std::string name);
AstPtr make_unary(AstKind kind, AstPtr a);
AstPtr make_binary(AstKind kind, AstPtr a, AstPtr b);
AstPtr make_call(Func f, AstPtr a);

// Grammar (see docs/grammar.md): left-associative +,-,*,/; right-associative
// ^ binding tighter than unary minus.  Throws Error{lex|parse} with the
// 0-based position of the problem.
AstPtr parse(std::string_view src);

// Emits a minimally parenthesized expression that parses back to a
// structurally identical tree.
std::string pretty_print(const Ast& node);

bool ast_equal(const Ast& x, const Ast& y);

// Names of all variables referenced by the expression.
std::set<std::string> free_variables(const Ast& node);

// --- evaluation ------------------------------------------------------------

// Scalar-generic arithmetic helpers.  The checked variants enforce the same
// domain rules for plain reals that the Jet operations enforce themselves,
// so both evaluation modes fail identically.
namespace detail {

inline double checked_divide(double a, double b) {
  if (b == 0.0) throw_error(ErrorCode::domain, "division by zero");
  return a / b;
}
inline Jet checked_divide(const Jet& a, const Jet& b) { return a / b; }

inline double checked_sqrt(double x) {
  if (!(x > 0.0)) throw_error(ErrorCode::domain, "sqrt of a non-positive value");
  return std::sqrt(x);
}
inline Jet checked_sqrt(const Jet& x) { return sqrt(x); }

inline double checked_log(double x) {
  if (!(x > 0.0)) throw_error(ErrorCode::domain, "ln of a non-positive value");
  return std::log(x);
}
inline Jet checked_log(const Jet& x) { return log(x); }

inline bool is_small_integer(double e) {
  return std::nearbyint(e) == e && std::abs(e) <= 64.0;
}

inline double checked_pow(double base, double e) {
  if (!is_small_integer(e) && !(base > 0.0))
    throw_error(ErrorCode::domain, "fractional power of a non-positive base");
  return std::pow(base, e);
}

inline Jet checked_pow(const Jet& base, const Jet& e) {
  // A constant exponent (all derivative coefficients zero) keeps integer
  // powers of arbitrary bases available; anything else needs exp/ln.
  bool constant_exponent = true;
  for (int k = 1; k <= e.order(); ++k)
    if (e.coeff(k) != 0.0) {
      constant_exponent = false;
      break;
    }
  if (constant_exponent) return pow(base, e.value());
  if (!(base.value() > 0.0))
    throw_error(ErrorCode::domain, "fractional power of a non-positive base");
  return exp(e * log(base));
}

template <class S>
S apply_func(Func f, const S& x) {
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::sin;
  using std::sinh;
  switch (f) {
    case Func::sin: return sin(x);
    case Func::cos: return cos(x);
    case Func::sinh: return sinh(x);
    case Func::cosh: return cosh(x);
    case Func::exp: return exp(x);
    case Func::sqrt: return checked_sqrt(x);
    case Func::ln: return checked_log(x);
  }
  throw_error(ErrorCode::invalid_argument, "unreachable function kind");
}

}  // namespace detail

// Evaluates the tree over any scalar kind.  `svar` supplies the value of the
// variable `s`; `lift` maps a plain real constant into the scalar kind.
template <class S, class Lift>
S evaluate_with(const Ast& node, const S& svar,
                const std::map<std::string, double>& constants,
                const Lift& lift) {
  switch (node.kind) {
    case AstKind::constant:
      return lift(node.number);
    case AstKind::variable: {
      if (node.name == "s") return svar;
      auto it = constants.find(node.name);
      if (it == constants.end())
        throw_error(ErrorCode::parse, "unknown identifier '" + node.name + "'");
      return lift(it->second);
    }
    case AstKind::negate:
      return -evaluate_with(*node.a, svar, constants, lift);
    case AstKind::add:
      return evaluate_with(*node.a, svar, constants, lift) +
             evaluate_with(*node.b, svar, constants, lift);
    case AstKind::subtract:
      return evaluate_with(*node.a, svar, constants, lift) -
             evaluate_with(*node.b, svar, constants, lift);
    case AstKind::multiply:
      return evaluate_with(*node.a, svar, constants, lift) *
             evaluate_with(*node.b, svar, constants, lift);
    case AstKind::divide:
      return detail::checked_divide(
          evaluate_with(*node.a, svar, constants, lift),
          evaluate_with(*node.b, svar, constants, lift));
    case AstKind::power:
      return detail::checked_pow(
          evaluate_with(*node.a, svar, constants, lift),
          evaluate_with(*node.b, svar, constants, lift));
    case AstKind::call:
      return detail::apply_func(node.func,
                                evaluate_with(*node.a, svar, constants, lift));
  }
  throw_error(ErrorCode::invalid_argument, "unreachable node kind");
}

// Plain-real evaluation.
double evaluate(const Ast& node, double s,
                const std::map<std::string, double>& constants);

// Jet evaluation: returns the truncated expansion of the expression at the
// base point of `s`.
Jet evaluate(const Ast& node, const Jet& s,
             const std::map<std::string, double>& constants);

}  // namespace nbc
