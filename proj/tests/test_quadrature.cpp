#include <doctest.h>

#include <cmath>
#include <vector>

#include "qcoord/quadrature.hpp"
#include "qcoord/sampling.hpp"

using namespace qcoord;

namespace {

// Exact integral of a polynomial from its antiderivative in long double.
long double poly_integral(const std::vector<double>& c, double a, double b) {
  long double fa = 0, fb = 0;
  for (std::size_t k = c.size(); k-- > 0;) {
    fa = fa * a + static_cast<long double>(c[k]) / static_cast<long double>(k + 1);
    fb = fb * b + static_cast<long double>(c[k]) / static_cast<long double>(k + 1);
  }
  return fb * b - fa * a;
}

double horner(const std::vector<double>& c, double x) {
  double r = 0;
  for (std::size_t k = c.size(); k-- > 0;) r = r * x + c[k];
  return r;
}

}  // namespace

TEST_CASE("1D examples") {
  CHECK(integrate_1d(parse("x^2", 1), Interval(0, 1)).value == doctest::Approx(1.0 / 3).epsilon(1e-10));
  const QuadResult one = integrate_1d(parse("1", 1), Interval(2, 5));
  CHECK(one.value == 3);
  CHECK(one.subdivisions >= 1);
  CHECK(one.abs_error_estimate >= 0);
  const QuadResult kink = integrate_1d(parse("abs(1-2*x)", 1), Interval(0, 1));
  CHECK(std::fabs(kink.value - 0.5) <= 1e-10);
}

TEST_CASE("2D examples") {
  const Box2 unit{Interval(0, 1), Interval(0, 1)};
  CHECK(std::fabs(integrate_2d(parse("x*y", 2), unit).value - 0.25) <= 1e-9);
  CHECK(integrate_2d(parse("1", 2), Box2{Interval(0, 2), Interval(0, 3)}).value == 6);
  CHECK(std::fabs(integrate_2d(parse("x^2+y^2", 2), unit).value - 2.0 / 3) <= 1e-9);
  const QuadResult g = integrate_2d(parse("exp(-x^2-y^2)", 2), Box2{Interval(-3, 3), Interval(-3, 3)});
  CHECK(g.converged);
  CHECK(g.value == doctest::Approx(std::pow(std::sqrt(M_PI) * std::erf(3.0), 2)).epsilon(1e-10));
}

TEST_CASE("absolute difference examples") {
  const Interval unit(0, 1);
  const Expr id = parse("x", 1);
  const QuadResult r = integrate_abs_difference([&](double t) { return id(t * 0 + (1 - t) * 1); },
                                                [&](double t) { return id((1 - t) * 0 + t * 1); },
                                                unit);
  CHECK(std::fabs(r.value - 0.5) <= 1e-10);

  const Expr f = parse("sin(3*x)+x^2", 1);
  auto g = [&](double t) { return f(t); };
  CHECK(integrate_abs_difference(g, g, unit).value == 0);

  const Expr v = parse("abs(x-0.5)", 1);
  const QuadResult sym = integrate_abs_difference([&](double t) { return v(1 - t); },
                                                  [&](double t) { return v(t); }, unit);
  CHECK(std::fabs(sym.value) <= 1e-12);
}

TEST_CASE("kink breakpoints bracket the sign changes") {
  auto g = [](double t) { return std::sin(10 * t); };
  auto h = [](double) { return 0.0; };
  const auto bp = kink_breakpoints(g, h, Interval(0, 1));
  REQUIRE(bp.size() == 3);
  for (int k = 1; k <= 3; ++k) CHECK(std::fabs(bp[k - 1] - k * M_PI / 10) <= 1e-11);
  const QuadResult r = integrate_abs_difference(g, h, Interval(0, 1));
  const double exact = (3 * 2.0 + (1 - std::cos(10.0 - 3 * M_PI))) / 10;
  CHECK(std::fabs(r.value - exact) <= 1e-10);
}

TEST_CASE("polynomial exactness") {
  Rng rng(42);
  for (int i = 0; i < 100; ++i) {
    const int degree = 1 + static_cast<int>(rng.uniform() * 13);
    std::vector<double> c(static_cast<std::size_t>(degree + 1));
    for (double& v : c) v = rng.uniform(-1, 1);
    const double a = rng.uniform(-2, 1);
    const double b = a + rng.uniform(0.1, 2);
    const QuadResult r = integrate_1d([&](double x) { return horner(c, x); }, Interval(a, b));
    const long double exact = poly_integral(c, a, b);
    const long double scale = std::max<long double>(std::fabs(exact), 1e-3L);
    CAPTURE(degree);
    CHECK(static_cast<double>(std::fabs(r.value - exact) / scale) <= 1e-12);
  }
}

TEST_CASE("linearity and additivity within error estimates") {
  Rng rng(9);
  const Expr f = parse("exp(x)*sin(3*x)", 1);
  const Expr g = parse("1/(1+x^2)", 1);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform(-2, 0), b = rng.uniform(0.5, 3);
    const double alpha = rng.uniform(-2, 2), beta = rng.uniform(-2, 2);
    const Interval iv(a, b);
    const QuadResult rf = integrate_1d(f, iv), rg = integrate_1d(g, iv);
    const QuadResult rc =
        integrate_1d([&](double x) { return alpha * f(x) + beta * g(x); }, iv);
    const double bound = std::fabs(alpha) * rf.abs_error_estimate +
                         std::fabs(beta) * rg.abs_error_estimate + rc.abs_error_estimate + 1e-14;
    CHECK(std::fabs(rc.value - (alpha * rf.value + beta * rg.value)) <= bound);

    const double m = rng.uniform(a + 0.01, b - 0.01);
    const QuadResult left = integrate_1d(f, Interval(a, m)), right = integrate_1d(f, Interval(m, b));
    CHECK(std::fabs(rf.value - (left.value + right.value)) <=
          rf.abs_error_estimate + left.abs_error_estimate + right.abs_error_estimate + 1e-14);
  }
}

TEST_CASE("error estimates are honest on a smooth battery") {
  struct Case {
    const char* f;
    double (*antiderivative)(double);
  };
  const Case cases[] = {
      {"exp(x)", [](double x) { return std::exp(x); }},
      {"sin(x)", [](double x) { return -std::cos(x); }},
      {"cos(5*x)", [](double x) { return std::sin(5 * x) / 5; }},
      {"x^5 - 2*x^3 + x", [](double x) { return std::pow(x, 6) / 6 - std::pow(x, 4) / 2 + x * x / 2; }},
      {"exp(-x)*x", [](double x) { return -(x + 1) * std::exp(-x); }},
  };
  Rng rng(77);
  int total = 0, honest = 0;
  for (const Case& c : cases) {
    const Expr f = parse(c.f, 1);
    for (int i = 0; i < 40; ++i) {
      const double a = rng.uniform(-3, 1), b = a + rng.uniform(0.05, 4);
      for (double tol : {1e-4, 1e-7, 1e-10}) {
        QuadConfig cfg;
        cfg.rel_tol = tol;
        const QuadResult r = integrate_1d(f, Interval(a, b), cfg);
        const double err = std::fabs(r.value - (c.antiderivative(b) - c.antiderivative(a)));
        ++total;
        if (err <= 10 * r.abs_error_estimate + 4e-16 * std::fabs(r.value)) ++honest;
      }
    }
  }
  CHECK(honest >= 0.99 * total);
}

TEST_CASE("budget exhaustion is flagged, not hidden") {
  QuadConfig cfg;
  cfg.max_subdivisions = 3;
  const QuadResult r = integrate_1d(parse("floor(10*x)*sin(40*x)", 1), Interval(0, 1), cfg);
  CHECK_FALSE(r.converged);
  CHECK(std::isfinite(r.value));
  CHECK(r.subdivisions <= 3);
  CHECK_THROWS_AS(integrate_1d(parse("log(x)", 1), Interval(-1, 1)), DomainError);
}

TEST_CASE("results do not depend on evaluation history") {
  const Expr f = parse("abs(sin(7*x*y)) + floor(3*x)", 2);
  const Box2 box{Interval(0, 1), Interval(0, 2)};
  const QuadResult a = integrate_2d(f, box);
  const QuadResult b = integrate_2d(f, box);
  CHECK(a.value == b.value);
  CHECK(a.abs_error_estimate == b.abs_error_estimate);
  CHECK(a.subdivisions == b.subdivisions);
}
