#include "nbc/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <utility>

namespace nbc {

// --- lexer -------------------------------------------------------------------

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

// Consumes a number literal starting at i; returns one past its end.
// Form: digits [ '.' [digits] ] [ (e|E) [+|-] digits ]  or  '.' digits [exp].
std::size_t scan_number(std::string_view s, std::size_t i) {
  std::size_t j = i;
  while (j < s.size() && is_digit(s[j])) ++j;
  if (j < s.size() && s[j] == '.') {
    ++j;
    while (j < s.size() && is_digit(s[j])) ++j;
  }
  if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
    std::size_t k = j + 1;
    if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
    if (k < s.size() && is_digit(s[k])) {
      ++k;
      while (k < s.size() && is_digit(s[k])) ++k;
      j = k;  // exponent only consumed when at least one digit follows
    }
  }
  return j;
}

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (is_digit(c) || (c == '.' && i + 1 < src.size() && is_digit(src[i + 1]))) {
      std::size_t j = scan_number(src, i);
      out.push_back({TokenKind::number, std::string(src.substr(i, j - i)), i});
      i = j;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i + 1;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      out.push_back({TokenKind::identifier, std::string(src.substr(i, j - i)), i});
      i = j;
      continue;
    }
    if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      out.push_back({TokenKind::op, std::string(1, c), i});
      ++i;
      continue;
    }
    if (c == '(' || c == ')') {
      out.push_back({TokenKind::paren, std::string(1, c), i});
      ++i;
      continue;
    }
    if (c == ',') {
      out.push_back({TokenKind::comma, std::string(1, c), i});
      ++i;
      continue;
    }
    throw_error(ErrorCode::lex,
                std::string("unexpected character '") + c + "' in expression", i);
  }
  return out;
}

// --- AST construction --------------------------------------------------------

const char* func_name(Func f) {
  switch (f) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::sinh: return "sinh";
    case Func::cosh: return "cosh";
    case Func::exp: return "exp";
    case Func::sqrt: return "sqrt";
    case Func::ln: return "ln";
  }
  return "?";
}

namespace {

const std::array<std::pair<std::string_view, Func>, 7> kFuncTable = {{
    {"sin", Func::sin},
    {"cos", Func::cos},
    {"sinh", Func::sinh},
    {"cosh", Func::cosh},
    {"exp", Func::exp},
    {"sqrt", Func::sqrt},
    {"ln", Func::ln},
}};

bool lookup_func(std::string_view name, Func& out) {
  for (const auto& [n, f] : kFuncTable)
    if (n == name) {
      out = f;
      return true;
    }
  return false;
}

}  // namespace

AstPtr make_constant(double v) {
  auto n = std::make_shared<Ast>();
  n->kind = AstKind::constant;
  n->number = v;
  return n;
}

AstPtr make_variable(std::string name) {
  auto n = std::make_shared<Ast>();
  n->kind = AstKind::variable;
  n->name = std::move(name);
  return n;
}

AstPtr make_unary(AstKind kind, AstPtr a) {
  auto n = std::make_shared<Ast>();
  n->kind = kind;
  n->a = std::move(a);
  return n;
}

AstPtr make_binary(AstKind kind, AstPtr a, AstPtr b) {
  auto n = std::make_shared<Ast>();
  n->kind = kind;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

AstPtr make_call(Func f, AstPtr a) {
  auto n = std::make_shared<Ast>();
  n->kind = AstKind::call;
  n->func = f;
  n->a = std::move(a);
  return n;
}

// --- parser --------------------------------------------------------------------
//
//   expr   = term { ("+" | "-") term }
//   term   = factor { ("*" | "/") factor }
//   factor = "-" factor | power
//   power  = atom [ "^" factor ]
//   atom   = number | identifier | identifier "(" expr ")" | "(" expr ")"

namespace {

class Parser {
 public:
  Parser(std::string_view src, std::vector<Token> tokens)
      : src_(src), tokens_(std::move(tokens)) {}

  AstPtr run() {
    AstPtr e = expr();
    if (pos_ < tokens_.size())
      fail("end of expression", tokens_[pos_].position);
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& expected, std::size_t position) {
    throw_error(ErrorCode::parse, "expected " + expected, position);
  }

  const Token* peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }

  bool accept_op(char c) {
    const Token* t = peek();
    if (t && t->kind == TokenKind::op && t->lexeme[0] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_paren(char c) {
    const Token* t = peek();
    if (t && t->kind == TokenKind::paren && t->lexeme[0] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::size_t here() const {
    return pos_ < tokens_.size() ? tokens_[pos_].position : src_.size();
  }

  AstPtr expr() {
    AstPtr e = term();
    for (;;) {
      if (accept_op('+'))
        e = make_binary(AstKind::add, e, term());
      else if (accept_op('-'))
        e = make_binary(AstKind::subtract, e, term());
      else
        return e;
    }
  }

  AstPtr term() {
    AstPtr e = factor();
    for (;;) {
      if (accept_op('*'))
        e = make_binary(AstKind::multiply, e, factor());
      else if (accept_op('/'))
        e = make_binary(AstKind::divide, e, factor());
      else
        return e;
    }
  }

  AstPtr factor() {
    if (accept_op('-')) return make_unary(AstKind::negate, factor());
    return power();
  }

  AstPtr power() {
    AstPtr base = atom();
    if (accept_op('^')) return make_binary(AstKind::power, base, factor());
    return base;
  }

  AstPtr atom() {
    const Token* t = peek();
    if (!t) fail("an operand", here());
    if (t->kind == TokenKind::number) {
      ++pos_;
      double v = 0.0;
      auto [p, ec] = std::from_chars(t->lexeme.data(),
                                     t->lexeme.data() + t->lexeme.size(), v);
      if (ec != std::errc() || p != t->lexeme.data() + t->lexeme.size())
        fail("a valid number literal", t->position);
      return make_constant(v);
    }
    if (t->kind == TokenKind::identifier) {
      ++pos_;
      Func f;
      bool is_func = lookup_func(t->lexeme, f);
      if (accept_paren('(')) {
        if (!is_func)
          throw_error(ErrorCode::parse, "unknown function '" + t->lexeme + "'",
                      t->position);
        AstPtr arg = expr();
        if (!accept_paren(')')) fail("')'", here());
        return make_call(f, arg);
      }
      if (is_func)
        throw_error(ErrorCode::parse,
                    "expected '(' after function name '" + t->lexeme + "'",
                    here());
      return make_variable(t->lexeme);
    }
    if (accept_paren('(')) {
      AstPtr e = expr();
      if (!accept_paren(')')) fail("')'", here());
      return e;
    }
    fail("an operand", t->position);
  }

  std::string_view src_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

AstPtr parse(std::string_view src) {
  return Parser(src, tokenize(src)).run();
}

// --- printing ------------------------------------------------------------------

namespace {

// Binding strength of a node when rendered: atoms 5, ^ 4, unary minus 3,
// * and / 2, + and - 1.
int precedence(const Ast& n) {
  switch (n.kind) {
    case AstKind::constant:
    case AstKind::variable:
    case AstKind::call:
      return 5;
    case AstKind::power:
      return 4;
    case AstKind::negate:
      return 3;
    case AstKind::multiply:
    case AstKind::divide:
      return 2;
    case AstKind::add:
    case AstKind::subtract:
      return 1;
  }
  return 0;
}

void print_node(const Ast& n, std::string& out);

void print_child(const Ast& child, bool need_parens, std::string& out) {
  if (need_parens) out += '(';
  print_node(child, out);
  if (need_parens) out += ')';
}

void print_node(const Ast& n, std::string& out) {
  switch (n.kind) {
    case AstKind::constant: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", n.number);
      out += buf;
      return;
    }
    case AstKind::variable:
      out += n.name;
      return;
    case AstKind::call:
      out += func_name(n.func);
      out += '(';
      print_node(*n.a, out);
      out += ')';
      return;
    case AstKind::negate:
      out += '-';
      // Anything binding weaker than unary minus changes meaning when bare.
      print_child(*n.a, precedence(*n.a) < 3, out);
      return;
    case AstKind::power:
      // The grammar only allows an atom on the left of ^; the right side is
      // a factor, so unary minus and chained ^ stay bare (right-assoc).
      print_child(*n.a, precedence(*n.a) < 5, out);
      out += '^';
      print_child(*n.b, precedence(*n.b) < 3, out);
      return;
    case AstKind::add:
    case AstKind::subtract:
    case AstKind::multiply:
    case AstKind::divide: {
      int p = precedence(n);
      print_child(*n.a, precedence(*n.a) < p, out);
      switch (n.kind) {
        case AstKind::add: out += '+'; break;
        case AstKind::subtract: out += '-'; break;
        case AstKind::multiply: out += '*'; break;
        default: out += '/'; break;
      }
      // Left associativity: a right operand of equal precedence must be
      // parenthesized to survive a round trip.
      print_child(*n.b, precedence(*n.b) <= p, out);
      return;
    }
  }
}

}  // namespace

std::string pretty_print(const Ast& node) {
  std::string out;
  print_node(node, out);
  return out;
}

bool ast_equal(const Ast& x, const Ast& y) {
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case AstKind::constant:
      return x.number == y.number;
    case AstKind::variable:
      return x.name == y.name;
    case AstKind::call:
      return x.func == y.func && ast_equal(*x.a, *y.a);
    case AstKind::negate:
      return ast_equal(*x.a, *y.a);
    default:
      return ast_equal(*x.a, *y.a) && ast_equal(*x.b, *y.b);
  }
}

std::set<std::string> free_variables(const Ast& node) {
  std::set<std::string> names;
  struct Walk {
    std::set<std::string>& names;
    void operator()(const Ast& n) const {
      if (n.kind == AstKind::variable) names.insert(n.name);
      if (n.a) (*this)(*n.a);
      if (n.b) (*this)(*n.b);
    }
  };
  Walk{names}(node);
  return names;
}

double evaluate(const Ast& node, double s,
                const std::map<std::string, double>& constants) {
  return evaluate_with<double>(node, s, constants, [](double v) { return v; });
}

Jet evaluate(const Ast& node, const Jet& s,
             const std::map<std::string, double>& constants) {
  double s0 = s.base_point();
  int order = s.order();
  return evaluate_with<Jet>(node, s, constants, [s0, order](double v) {
    return Jet::constant(s0, order, v);
  });
}

}  // namespace nbc
