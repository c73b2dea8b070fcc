#include "xphase/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

namespace xphase::expr {

namespace {

bool is_const(const Ast& a, double v) {
  return a->kind == NodeKind::constant && a->value == v;
}

Ast node(Node n) { return std::make_shared<const Node>(std::move(n)); }

}  // namespace

Ast mk_const(double v) {
  Node n;
  n.kind = NodeKind::constant;
  n.value = v;
  return node(std::move(n));
}

Ast mk_var(int var) {
  if (var < 0 || var > kVarT)
    throw Error(ErrorKind::validation, "expression variable index out of range");
  Node n;
  n.kind = NodeKind::variable;
  n.var = var;
  return node(std::move(n));
}

Ast mk_param(const std::string& name) {
  Node n;
  n.kind = NodeKind::parameter;
  n.param = name;
  return node(std::move(n));
}

Ast mk_neg(const Ast& a) {
  if (a->kind == NodeKind::constant) return mk_const(-a->value);
  if (a->kind == NodeKind::unary && a->fn == Fn::neg) return a->a;
  Node n;
  n.kind = NodeKind::unary;
  n.fn = Fn::neg;
  n.a = a;
  return node(std::move(n));
}

Ast mk_fn(Fn f, const Ast& a) {
  if (f == Fn::neg) return mk_neg(a);
  Node n;
  n.kind = NodeKind::unary;
  n.fn = f;
  n.a = a;
  return node(std::move(n));
}

Ast mk_add(const Ast& a, const Ast& b) {
  if (a->kind == NodeKind::constant && b->kind == NodeKind::constant)
    return mk_const(a->value + b->value);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  Node n;
  n.kind = NodeKind::binary;
  n.op = BinOp::add;
  n.a = a;
  n.b = b;
  return node(std::move(n));
}

Ast mk_sub(const Ast& a, const Ast& b) {
  if (a->kind == NodeKind::constant && b->kind == NodeKind::constant)
    return mk_const(a->value - b->value);
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return mk_neg(b);
  Node n;
  n.kind = NodeKind::binary;
  n.op = BinOp::sub;
  n.a = a;
  n.b = b;
  return node(std::move(n));
}

Ast mk_mul(const Ast& a, const Ast& b) {
  if (a->kind == NodeKind::constant && b->kind == NodeKind::constant)
    return mk_const(a->value * b->value);
  if (is_const(a, 0.0) || is_const(b, 0.0)) return mk_const(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (is_const(a, -1.0)) return mk_neg(b);
  if (is_const(b, -1.0)) return mk_neg(a);
  // canonical order: constant factors on the left
  if (b->kind == NodeKind::constant && a->kind != NodeKind::constant)
    return mk_mul(b, a);
  Node n;
  n.kind = NodeKind::binary;
  n.op = BinOp::mul;
  n.a = a;
  n.b = b;
  return node(std::move(n));
}

Ast mk_div(const Ast& a, const Ast& b) {
  if (is_const(b, 0.0))
    throw Error(ErrorKind::semantic, "division by constant zero");
  if (a->kind == NodeKind::constant && b->kind == NodeKind::constant)
    return mk_const(a->value / b->value);
  if (is_const(a, 0.0)) return mk_const(0.0);
  if (is_const(b, 1.0)) return a;
  if (is_const(b, -1.0)) return mk_neg(a);
  Node n;
  n.kind = NodeKind::binary;
  n.op = BinOp::div;
  n.a = a;
  n.b = b;
  return node(std::move(n));
}

Ast mk_pow(const Ast& a, int exponent) {
  if (std::abs(exponent) > 64)
    throw Error(ErrorKind::validation, "exponent magnitude above 64");
  if (exponent == 0) return mk_const(1.0);
  if (exponent == 1) return a;
  if (a->kind == NodeKind::constant) return mk_const(std::pow(a->value, exponent));
  Node n;
  n.kind = NodeKind::power;
  n.exponent = exponent;
  n.a = a;
  return node(std::move(n));
}

// ---------------------------------------------------------------- lexer

namespace {

struct Token {
  enum Kind { number, ident, sym, end } kind = end;
  std::string text;
  double num = 0.0;
  std::size_t offset = 0;
};

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;

  Token next() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos >= src.size()) return Token{Token::end, "", 0.0, src.size()};
    const std::size_t start = pos;
    const char ch = src[pos];
    if (std::isdigit(static_cast<unsigned char>(ch))) return lex_number(start);
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        ++pos;
      return Token{Token::ident, std::string(src.substr(start, pos - start)), 0.0, start};
    }
    if (std::string_view("+-*/^()").find(ch) != std::string_view::npos) {
      ++pos;
      return Token{Token::sym, std::string(1, ch), 0.0, start};
    }
    throw Error(ErrorKind::lexical,
                "unexpected character '" + std::string(1, ch) + "'", start);
  }

  Token lex_number(std::size_t start) {
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos < src.size() && src[pos] == '.') {
      ++pos;
      if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
        throw Error(ErrorKind::lexical, "malformed number: digit required after '.'", pos);
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      ++pos;
      if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
      if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
        throw Error(ErrorKind::lexical, "malformed number: digit required in exponent", pos);
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    const std::string text(src.substr(start, pos - start));
    return Token{Token::number, text, std::strtod(text.c_str(), nullptr), start};
  }
};

// ---------------------------------------------------------------- parser

struct Parser {
  Lexer lex;
  Token cur;
  const std::set<std::string>& params;

  Parser(std::string_view src, const std::set<std::string>& p) : lex{src}, params(p) {
    advance();
  }

  void advance() { cur = lex.next(); }

  [[noreturn]] void fail(const std::string& msg) {
    throw Error(ErrorKind::syntax, msg, cur.offset);
  }

  bool at_sym(char ch) const {
    return cur.kind == Token::sym && cur.text.size() == 1 && cur.text[0] == ch;
  }

  void expect(char ch, const std::string& what) {
    if (!at_sym(ch)) fail("expected '" + std::string(1, ch) + "' " + what);
    advance();
  }

  Ast expression() {
    Ast a = term();
    while (at_sym('+') || at_sym('-')) {
      const bool plus = at_sym('+');
      advance();
      Ast b = term();
      a = plus ? mk_add(a, b) : mk_sub(a, b);
    }
    return a;
  }

  Ast term() {
    Ast a = factor();
    while (at_sym('*') || at_sym('/')) {
      const bool times = at_sym('*');
      const std::size_t op_offset = cur.offset;
      advance();
      Ast b = factor();
      if (times) {
        a = mk_mul(a, b);
      } else {
        try {
          a = mk_div(a, b);
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::semantic)
            throw Error(ErrorKind::semantic, e.what(), op_offset);
          throw;
        }
      }
    }
    return a;
  }

  Ast factor() {
    Ast b = base();
    if (at_sym('^')) {
      advance();
      int sign = 1;
      if (at_sym('-')) {
        sign = -1;
        advance();
      }
      if (cur.kind != Token::number ||
          cur.text.find_first_of(".eE") != std::string::npos)
        fail("expected integer exponent after '^'");
      const long n = std::strtol(cur.text.c_str(), nullptr, 10);
      advance();
      return mk_pow(b, sign * static_cast<int>(n));
    }
    return b;
  }

  Ast base() {
    if (cur.kind == Token::number) {
      const double v = cur.num;
      advance();
      return mk_const(v);
    }
    if (at_sym('(')) {
      advance();
      Ast inner = expression();
      expect(')', "to close parenthesized expression");
      return inner;
    }
    if (at_sym('-')) {
      advance();
      return mk_neg(base());
    }
    if (cur.kind == Token::ident) {
      const std::string name = cur.text;
      const std::size_t offset = cur.offset;
      advance();
      if (name == "sin" || name == "cos" || name == "exp" || name == "sqrt") {
        if (!at_sym('(')) fail("function '" + name + "' requires an argument list");
        advance();
        Ast arg = expression();
        expect(')', "to close argument of '" + name + "'");
        Fn f = Fn::sin;
        if (name == "cos") f = Fn::cos;
        else if (name == "exp") f = Fn::exp;
        else if (name == "sqrt") f = Fn::sqrt;
        return mk_fn(f, arg);
      }
      if (name == "q1") return mk_var(0);
      if (name == "q2") return mk_var(1);
      if (name == "q3") return mk_var(2);
      if (name == "t") return mk_var(kVarT);
      if (params.count(name)) return mk_param(name);
      throw Error(ErrorKind::unknown_identifier,
                  "unknown identifier '" + name + "'", offset);
    }
    fail("expected expression");
  }
};

}  // namespace

Ast parse(std::string_view src, const std::set<std::string>& params) {
  Parser p(src, params);
  Ast a = p.expression();
  if (p.cur.kind != Token::end) p.fail("unexpected trailing input");
  return a;
}

// ---------------------------------------------------------------- eval

namespace {

double eval_raw(const Ast& ast, const Vec3& q, double t,
                const std::map<std::string, double>& params) {
  switch (ast->kind) {
    case NodeKind::constant:
      return ast->value;
    case NodeKind::variable:
      return ast->var == kVarT ? t : q[ast->var];
    case NodeKind::parameter: {
      auto it = params.find(ast->param);
      if (it == params.end())
        throw Error(ErrorKind::unbound_parameter,
                    "unbound parameter '" + ast->param + "'");
      return it->second;
    }
    case NodeKind::unary: {
      const double v = eval_raw(ast->a, q, t, params);
      switch (ast->fn) {
        case Fn::neg: return -v;
        case Fn::sin: return std::sin(v);
        case Fn::cos: return std::cos(v);
        case Fn::exp: return std::exp(v);
        case Fn::sqrt: return std::sqrt(v);
      }
      return 0.0;
    }
    case NodeKind::binary: {
      const double a = eval_raw(ast->a, q, t, params);
      const double b = eval_raw(ast->b, q, t, params);
      switch (ast->op) {
        case BinOp::add: return a + b;
        case BinOp::sub: return a - b;
        case BinOp::mul: return a * b;
        case BinOp::div: return a / b;
      }
      return 0.0;
    }
    case NodeKind::power:
      return std::pow(eval_raw(ast->a, q, t, params), ast->exponent);
  }
  return 0.0;
}

}  // namespace

double eval(const Ast& ast, const Vec3& q, double t,
            const std::map<std::string, double>& params) {
  const double v = eval_raw(ast, q, t, params);
  if (!std::isfinite(v))
    throw Error(ErrorKind::non_finite,
                "expression evaluated to a non-finite value: " + print(ast));
  return v;
}

// ---------------------------------------------------------------- diff

Ast diff(const Ast& ast, int var) {
  if (var < 0 || var > kVarT)
    throw Error(ErrorKind::validation, "diff: variable index out of range");
  switch (ast->kind) {
    case NodeKind::constant:
    case NodeKind::parameter:
      return mk_const(0.0);
    case NodeKind::variable:
      return mk_const(ast->var == var ? 1.0 : 0.0);
    case NodeKind::unary: {
      Ast du = diff(ast->a, var);
      switch (ast->fn) {
        case Fn::neg: return mk_neg(du);
        case Fn::sin: return mk_mul(mk_fn(Fn::cos, ast->a), du);
        case Fn::cos: return mk_mul(mk_neg(mk_fn(Fn::sin, ast->a)), du);
        case Fn::exp: return mk_mul(mk_fn(Fn::exp, ast->a), du);
        case Fn::sqrt:
          return mk_div(du, mk_mul(mk_const(2.0), mk_fn(Fn::sqrt, ast->a)));
      }
      return mk_const(0.0);
    }
    case NodeKind::binary: {
      Ast da = diff(ast->a, var);
      Ast db = diff(ast->b, var);
      switch (ast->op) {
        case BinOp::add: return mk_add(da, db);
        case BinOp::sub: return mk_sub(da, db);
        case BinOp::mul: return mk_add(mk_mul(da, ast->b), mk_mul(ast->a, db));
        case BinOp::div:
          return mk_div(mk_sub(mk_mul(da, ast->b), mk_mul(ast->a, db)),
                        mk_pow(ast->b, 2));
      }
      return mk_const(0.0);
    }
    case NodeKind::power:
      return mk_mul(mk_mul(mk_const(static_cast<double>(ast->exponent)),
                           mk_pow(ast->a, ast->exponent - 1)),
                    diff(ast->a, var));
  }
  return mk_const(0.0);
}

Ast diff(const Ast& ast, const std::string& var) {
  if (var == "q1") return diff(ast, 0);
  if (var == "q2") return diff(ast, 1);
  if (var == "q3") return diff(ast, 2);
  if (var == "t") return diff(ast, kVarT);
  throw Error(ErrorKind::validation, "diff: unrecognized variable '" + var + "'");
}

// ---------------------------------------------------------------- print

namespace {

// Precedence: additive 1, multiplicative 2, unary 3, power 4, atoms 5.
int precedence(const Ast& a) {
  switch (a->kind) {
    case NodeKind::binary:
      return (a->op == BinOp::add || a->op == BinOp::sub) ? 1 : 2;
    case NodeKind::unary:
      return a->fn == Fn::neg ? 3 : 5;  // named functions print atomically
    case NodeKind::power:
      return 4;
    default:
      return 5;
  }
}

std::string print_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_rec(const Ast& a, std::string& out) {
  auto child = [&out](const Ast& c, int min_prec) {
    if (precedence(c) < min_prec) {
      out += '(';
      print_rec(c, out);
      out += ')';
    } else {
      print_rec(c, out);
    }
  };
  switch (a->kind) {
    case NodeKind::constant:
      if (a->value < 0.0 || (a->value == 0.0 && std::signbit(a->value))) {
        out += '-';
        out += print_number(-a->value);
      } else {
        out += print_number(a->value);
      }
      return;
    case NodeKind::variable: {
      static const char* names[4] = {"q1", "q2", "q3", "t"};
      out += names[a->var];
      return;
    }
    case NodeKind::parameter:
      out += a->param;
      return;
    case NodeKind::unary:
      switch (a->fn) {
        case Fn::neg:
          out += '-';
          child(a->a, 3);
          return;
        case Fn::sin: out += "sin("; break;
        case Fn::cos: out += "cos("; break;
        case Fn::exp: out += "exp("; break;
        case Fn::sqrt: out += "sqrt("; break;
      }
      print_rec(a->a, out);
      out += ')';
      return;
    case NodeKind::binary: {
      const bool additive = (a->op == BinOp::add || a->op == BinOp::sub);
      const int prec = additive ? 1 : 2;
      child(a->a, prec);
      switch (a->op) {
        case BinOp::add: out += " + "; break;
        case BinOp::sub: out += " - "; break;
        case BinOp::mul: out += "*"; break;
        case BinOp::div: out += "/"; break;
      }
      // right operand of - and / binds one level tighter
      const bool strict = (a->op == BinOp::sub || a->op == BinOp::div);
      child(a->b, prec + (strict ? 1 : 0));
      return;
    }
    case NodeKind::power:
      child(a->a, 5);
      out += '^';
      out += std::to_string(a->exponent);
      return;
  }
}

}  // namespace

std::string print(const Ast& ast) {
  std::string out;
  print_rec(ast, out);
  return out;
}

bool equal(const Ast& a, const Ast& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::constant:
      return a->value == b->value && std::signbit(a->value) == std::signbit(b->value);
    case NodeKind::variable:
      return a->var == b->var;
    case NodeKind::parameter:
      return a->param == b->param;
    case NodeKind::unary:
      return a->fn == b->fn && equal(a->a, b->a);
    case NodeKind::binary:
      return a->op == b->op && equal(a->a, b->a) && equal(a->b, b->b);
    case NodeKind::power:
      return a->exponent == b->exponent && equal(a->a, b->a);
  }
  return false;
}

}  // namespace xphase::expr
