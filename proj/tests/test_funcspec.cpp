#include <doctest.h>

#include <bit>
#include <cmath>
#include <string>

#include "qcoord/expr.hpp"
#include "qcoord/sampling.hpp"

using namespace qcoord;

namespace {

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace

TEST_CASE("parse and eval examples") {
  CHECK(parse("x^2+y^2", 2)(1, 2) == 5);
  CHECK(parse("max(x, y)", 2)(0.3, 0.7) == 0.7);
  CHECK(parse("x*y", 2)(0.5, 0.5) == 0.25);
  CHECK(parse("abs(1-2*x)", 1)(0.5) == 0);
  CHECK(parse("min(x, y)", 2)(0.3, 0.7) == 0.3);
  CHECK(parse("pi", 1)(0) == doctest::Approx(3.141592653589793));
  CHECK(parse("2^3^2", 1)(0) == 512);
  CHECK(parse("-x^2", 1)(3) == -9);
  CHECK(parse("-2*3+1", 1)(0) == -5);
  CHECK(parse("8/2/2", 1)(0) == 2);
  CHECK(parse("floor(-0.5)", 1)(0) == -1);
  CHECK(parse("1.5e2 + .5", 1)(0) == 150.5);
  CHECK(parse("exp(log(x))", 1)(2) == doctest::Approx(2));
  CHECK(parse("sin(x)^2 + cos(x)^2", 1)(0.7) == doctest::Approx(1));
  CHECK(parse("(-8)^(1/3)", 1).arity() == 1);
}

TEST_CASE("syntax errors carry the offset") {
  try {
    parse("x +* y", 2);
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 3);
  }
  for (const char* bad : {"", "   ", "(x", "x)", "abs x", "max(x)", "min(x,y,x)", "2..3", "x y",
                          "foo(x)", "x^", "#", "1e", "sqrt()"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse(bad, 2), SyntaxError);
  }
}

TEST_CASE("arity errors") {
  CHECK_THROWS_AS(parse("x + y", 1), ArityError);
  CHECK_THROWS_AS(parse("t * x", 2), ArityError);
  CHECK_THROWS_AS(parse("t", 1), ArityError);
  CHECK_NOTHROW(parse("x", 2));
  const Expr one = parse("x", 1);
  CHECK_THROWS_AS(one(1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(one.eval(1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(parse("x", 2).eval(1.0), std::invalid_argument);
}

TEST_CASE("domain errors carry the point") {
  try {
    parse("sqrt(x)", 1)(-1);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.point().x == -1);
    CHECK(e.arity() == 1);
  }
  CHECK_THROWS_AS(parse("log(x)", 1)(0), DomainError);
  CHECK_THROWS_AS(parse("1/x", 1)(0), DomainError);
  CHECK_THROWS_AS(parse("x^0.5", 1)(-4), DomainError);
  CHECK(parse("x^2", 1)(-4) == 16);
  CHECK_THROWS_AS(parse("exp(x)", 1)(1000), DomainError);
  try {
    parse("1/(x-y)", 2)(0.25, 0.25);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.point() == Point{0.25, 0.25});
  }
}

TEST_CASE("restrict examples") {
  CHECK(restrict(parse("x^2+y^2", 2), Axis::X, 0.5)(1) == 1.25);
  const Expr zero = restrict(parse("x*y", 2), Axis::Y, 0);
  for (double x : {-3.0, 0.1, 7.0}) CHECK(zero(x) == 0);
  CHECK(restrict(parse("x+y", 2), Axis::X, 0.25)(0.75) == 1.0);
  CHECK_THROWS_AS(restrict(parse("x", 1), Axis::X, 0), std::invalid_argument);
}

TEST_CASE("restrict round-trip is bit-exact") {
  Rng rng(11);
  for (const char* text : {"x^2+y^2", "sin(3*x*y) - exp(x)/(2+cos(y))", "max(x,y)*abs(x-0.3)",
                           "floor(4*x) + sqrt(abs(y))", "x/3 + y/7 + 0.1*x*y"}) {
    const Expr e = parse(text, 2);
    for (int i = 0; i < 1000; ++i) {
      const double x0 = rng.uniform(-2, 2), y0 = rng.uniform(-2, 2);
      CHECK(same_bits(restrict(e, Axis::X, x0)(y0), e(x0, y0)));
      CHECK(same_bits(restrict(e, Axis::Y, y0)(x0), e(x0, y0)));
    }
  }
}

TEST_CASE("evaluation is deterministic") {
  const Expr e = parse("exp(sin(x*y)) + log(1 + x^2) / (1 + y^2)", 2);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-5, 5), y = rng.uniform(-5, 5);
    const double a = e(x, y);
    const double b = e(x, y);
    CHECK(same_bits(a, b));
    const Expr copy = e;
    CHECK(same_bits(copy(x, y), a));
  }
}

TEST_CASE("printed form re-parses to the same function") {
  Rng rng(5);
  for (const char* text : {"x^2+y^2", "-x^2-y^2", "-(x^2)", "2^-x", "min(x,-y)/3",
                           "1 - floor(x+0.1)*(1-floor(y+0.5))", "abs(x)^1.5 - 0.1"}) {
    const Expr e = parse(text, 2);
    const Expr back = parse(e.to_string(), 2);
    CHECK(back.to_string() == e.to_string());
    for (int i = 0; i < 50; ++i) {
      const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1);
      CHECK(same_bits(back(x, y), e(x, y)));
    }
  }
  CHECK(parse(format_number(0.1), 1)(0) == 0.1);
  CHECK(parse(format_number(1.0 / 3), 1)(0) == 1.0 / 3);
}

TEST_CASE("parser is total on fuzzed input") {
  const std::string alphabet = "xyt0123456789.+-*/^(),e absqrtlogexpsincosfloormaxminpi\t#";
  Rng rng(2024);
  int parsed = 0, rejected = 0;
  for (int i = 0; i < 3000; ++i) {
    const std::size_t len = static_cast<std::size_t>(rng.uniform() * 1024);
    std::string s;
    for (std::size_t k = 0; k < len; ++k) {
      s.push_back(alphabet[static_cast<std::size_t>(rng.uniform() * alphabet.size())]);
    }
    try {
      (void)parse(s, 2);
      ++parsed;
    } catch (const SyntaxError& e) {
      CHECK(e.offset() <= s.size());
      ++rejected;
    } catch (const ArityError& e) {
      CHECK(e.offset() <= s.size());
      ++rejected;
    }
  }
  CHECK(parsed + rejected == 3000);

  // Mutations of valid text exercise deeper paths than uniform noise.
  const std::string seed_text = "max(abs(x-0.5), sqrt(y^2+1)) * -floor(2*x) / (1+exp(-y))";
  for (int i = 0; i < 3000; ++i) {
    std::string s = seed_text;
    const int edits = 1 + static_cast<int>(rng.uniform() * 4);
    for (int k = 0; k < edits; ++k) {
      const std::size_t pos = static_cast<std::size_t>(rng.uniform() * s.size());
      const char c = alphabet[static_cast<std::size_t>(rng.uniform() * alphabet.size())];
      if (rng.uniform() < 0.5) {
        s[pos] = c;
      } else {
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(pos), c);
      }
    }
    try {
      const Expr e = parse(s, 2);
      try {
        (void)e(0.3, 0.6);
      } catch (const DomainError&) {
      }
    } catch (const ParseError& e) {
      CHECK(e.offset() <= s.size());
    }
  }
}

TEST_CASE("deep nesting is rejected, not a crash") {
  std::string deep(5000, '(');
  deep += "x";
  deep += std::string(5000, ')');
  CHECK_THROWS_AS(parse(deep, 1), SyntaxError);
  std::string minus(5000, '-');
  CHECK_THROWS_AS(parse(minus + "x", 1), SyntaxError);
  std::string ok(100, '(');
  CHECK(parse(ok + "x" + std::string(100, ')'), 1)(2) == 2);
}
