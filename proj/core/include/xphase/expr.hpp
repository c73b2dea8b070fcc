#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "xphase/error.hpp"
#include "xphase/state.hpp"

namespace xphase::expr {

// Scalar fields of (q1, q2, q3, t) plus named parameters.
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' int)?
//   base   := number | ident | ident '(' expr ')' | '(' expr ')' | '-' base
// Functions: sin, cos, exp, sqrt. Whitespace is insignificant.

enum class NodeKind { constant, variable, parameter, unary, binary, power };
enum class Fn { neg, sin, cos, exp, sqrt };
enum class BinOp { add, sub, mul, div };

// Variable indices: 0..2 = q1..q3, 3 = t.
inline constexpr int kVarT = 3;

struct Node;
using Ast = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  double value = 0.0;   // constant
  int var = -1;         // variable
  std::string param;    // parameter
  Fn fn = Fn::neg;      // unary
  BinOp op = BinOp::add;  // binary
  int exponent = 0;     // power
  Ast a, b;
};

// Builders fold constants and apply local simplification (0*x -> 0, x+0 -> x,
// x^1 -> x, (-1)*x -> -x, ...). A statically-zero constant denominator is
// rejected with ErrorKind::semantic.
Ast mk_const(double v);
Ast mk_var(int var);
Ast mk_param(const std::string& name);
Ast mk_neg(const Ast& a);
Ast mk_fn(Fn f, const Ast& a);
Ast mk_add(const Ast& a, const Ast& b);
Ast mk_sub(const Ast& a, const Ast& b);
Ast mk_mul(const Ast& a, const Ast& b);
Ast mk_div(const Ast& a, const Ast& b);
Ast mk_pow(const Ast& a, int exponent);

// Throws Error with kind lexical/syntax (byte offset) or unknown_identifier.
Ast parse(std::string_view src, const std::set<std::string>& params = {});

// Throws unbound_parameter, and non_finite when the result is NaN/Inf.
double eval(const Ast& ast, const Vec3& q, double t,
            const std::map<std::string, double>& params);

// Exact symbolic derivative; var is 0..2 for q1..q3 or kVarT.
Ast diff(const Ast& ast, int var);
Ast diff(const Ast& ast, const std::string& var);  // "q1","q2","q3","t"

// Canonical text form; parse(print(ast)) == ast structurally.
std::string print(const Ast& ast);

bool equal(const Ast& a, const Ast& b);

}  // namespace xphase::expr
