#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "xphase/error.hpp"
#include "xphase/expr.hpp"

using namespace xphase;
using namespace xphase::expr;

namespace {
double ev(const std::string& src, const Vec3& q, double t,
          const std::map<std::string, double>& params = {}) {
  std::set<std::string> names;
  for (const auto& kv : params) names.insert(kv.first);
  return eval(parse(src, names), q, t, params);
}
}  // namespace

TEST_CASE("arithmetic and precedence") {
  Vec3 q(1.0, 2.0, 3.0);
  CHECK(ev("q1 + 2*q2^2", q, 0.0) == 9.0);
  CHECK(ev("2 - 3 - 4", q, 0.0) == -5.0);       // left associative
  CHECK(ev("12 / 3 / 2", q, 0.0) == 2.0);
  CHECK(ev("2*3^2", q, 0.0) == 18.0);           // power binds tighter
  CHECK(ev("(q1 + q2)^2", q, 0.0) == 9.0);
  CHECK(ev("-q1^2", q, 0.0) == 1.0);  // '-' is part of base, binds before '^'
  CHECK(ev("-(q1^2)", q, 0.0) == -1.0);
  CHECK(ev("q3*t", q, 0.5) == 1.5);
}

TEST_CASE("functions") {
  Vec3 q(0.25, 0.0, 0.0);
  CHECK(ev("sqrt(q1)", q, 0.0) == 0.5);
  CHECK(ev("sin(t)", q, 1.0) == doctest::Approx(std::sin(1.0)).epsilon(1e-15));
  CHECK(ev("cos(0)", q, 0.0) == 1.0);
  CHECK(ev("exp(1)", q, 0.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
}

TEST_CASE("parameters bind at eval time") {
  std::set<std::string> names{"k0"};
  Ast a = parse("k0*q1", names);
  CHECK(eval(a, Vec3(2.0, 0.0, 0.0), 0.0, {{"k0", 3.0}}) == 6.0);
  CHECK_THROWS_AS(eval(a, Vec3(2.0, 0.0, 0.0), 0.0, {}), Error);
  try {
    eval(a, Vec3(2.0, 0.0, 0.0), 0.0, {});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unbound_parameter);
  }
}

TEST_CASE("syntax errors carry byte offsets") {
  try {
    parse("q1 + ");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::syntax);
    REQUIRE(e.offset().has_value());
    CHECK(*e.offset() == 5);
  }
  try {
    parse("q1 + (q2");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::syntax);
    CHECK(e.offset().has_value());
  }
}

TEST_CASE("unknown identifiers are rejected with position") {
  try {
    parse("q1 + bogus");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unknown_identifier);
    REQUIRE(e.offset().has_value());
    CHECK(*e.offset() == 5);
  }
  // q4 is not a variable
  CHECK_THROWS_AS(parse("q4"), Error);
}

TEST_CASE("static zero denominator is a semantic error") {
  try {
    parse("q1/0");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::semantic);
  }
  CHECK_THROWS_AS(parse("1/(2 - 2)"), Error);
}

TEST_CASE("runtime non-finite results are flagged") {
  try {
    ev("1/q1", Vec3(0.0, 0.0, 0.0), 0.0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_finite);
  }
  CHECK_THROWS_AS(ev("sqrt(q1)", Vec3(-1.0, 0.0, 0.0), 0.0), Error);
}

TEST_CASE("derivative oracles") {
  CHECK(print(diff(parse("q1^2"), 0)) == "2*q1");
  CHECK(print(diff(parse("sin(q1 - t)"), "t")) == "-cos(q1 - t)");
  CHECK(print(diff(parse("q1*q2"), "q2")) == "q1");
  CHECK(print(diff(parse("exp(2*t)"), "t")) == "2*exp(2*t)");
  CHECK(print(diff(parse("cos(q2)"), 1)) == "-sin(q2)");
  // d/dq1 sqrt(q1): 1/(2 sqrt(q1)); check numerically to dodge layout choices
  Ast d = diff(parse("sqrt(q1)"), 0);
  CHECK(eval(d, Vec3(4.0, 0.0, 0.0), 0.0, {}) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("derivative of a constant in a variable it lacks is zero") {
  Ast d = diff(parse("q1^2 + sin(q2)"), "q3");
  CHECK(print(d) == "0");
}

TEST_CASE("parse-print-parse is stable") {
  std::vector<std::string> sources = {
      "q1 + 2*q2^2",
      "sin(q1 - t)*exp(q3)",
      "-q1^2 + q2/q3",
      "sqrt(q1^2 + q2^2 + q3^2)",
      "cos(t)*(q1 - q2)^3",
  };
  for (const auto& src : sources) {
    Ast a = parse(src);
    Ast b = parse(print(a));
    CHECK(equal(a, b));
  }
}

TEST_CASE("builders fold constants") {
  CHECK(print(parse("0*q1 + q2")) == "q2");
  CHECK(print(parse("q1^1")) == "q1");
  CHECK(print(parse("1*q1")) == "q1");
  CHECK(print(parse("2 + 3")) == "5");
  CHECK(print(parse("q1 + 0")) == "q1");
}

TEST_CASE("chain rule composes through nesting") {
  // d/dq1 sin(q1^2) = 2 q1 cos(q1^2)
  Ast d = diff(parse("sin(q1^2)"), 0);
  double q1 = 0.7;
  double want = 2.0 * q1 * std::cos(q1 * q1);
  CHECK(eval(d, Vec3(q1, 0.0, 0.0), 0.0, {}) == doctest::Approx(want).epsilon(1e-15));
}
