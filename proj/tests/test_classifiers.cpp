#include <doctest.h>

#include <cmath>
#include <string>

#include "qcoord/classifiers.hpp"
#include "qcoord/sampling.hpp"

using namespace qcoord;

namespace {

const Box2 kSquare{Interval(-1, 1), Interval(-1, 1)};
const Box2 kUnit{Interval(0, 1), Interval(0, 1)};

Witness witness_of(const Verdict& v) {
  REQUIRE(is_violated(v));
  return std::get<Violated>(v).witness;
}

Params with_t(double t) {
  Params p;
  p.t = t;
  return p;
}

}  // namespace

TEST_CASE("defining inequality examples") {
  const Sides qc = defining_inequality(ClassId::QC2, parse("x^2+y^2", 2), {0, 0}, {1, 1}, with_t(0.5));
  CHECK(qc.lhs == 0.5);
  CHECK(qc.rhs == 2);

  const Sides jqc = defining_inequality(ClassId::JQC2, parse("-x^2", 2), {-1, 0}, {1, 0}, {});
  CHECK(jqc.lhs == 0);
  CHECK(jqc.rhs == -1);

  const Expr affine = parse("x+y", 2);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    Params p;
    p.t = rng.uniform();
    p.s = rng.uniform();
    const Point a{rng.uniform(-1, 1), rng.uniform(-1, 1)}, b{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Sides w = defining_inequality(ClassId::W2, affine, a, b, p);
    CHECK(std::fabs(w.lhs - w.rhs) <= 1e-12);
  }

  const Sides c2 = defining_inequality(ClassId::C2, parse("sqrt(abs(x))", 2), {0, 0}, {1, 0}, with_t(0.5));
  CHECK(c2.lhs == doctest::Approx(std::sqrt(0.5)));
  CHECK(c2.rhs == 0.5);

  CHECK_THROWS(defining_inequality(ClassId::CoordQC2, parse("x", 2), {0, 0}, {1, 1}, {}));
}

TEST_CASE("paraboloid shows no quasi-convexity violation, confirmed by brute force") {
  const Expr f = parse("x^2+y^2", 2);
  const Verdict v = check_membership(f, kSquare, ClassId::QC2);
  REQUIRE(is_clear(v));
  CHECK(std::get<NoViolationFound>(v).resolution == 17);
  CHECK(describe(v).find("no violation found at resolution 17") != std::string::npos);

  // Independent oracle over every grid pair and a lambda grid.
  const int n = 17;
  int violations = 0;
  for (int i1 = 0; i1 < n * n; ++i1) {
    for (int i2 = 0; i2 < n * n; ++i2) {
      const double x1 = kSquare.x.grid_point(i1 % n, n), y1 = kSquare.y.grid_point(i1 / n, n);
      const double x2 = kSquare.x.grid_point(i2 % n, n), y2 = kSquare.y.grid_point(i2 / n, n);
      for (int k = 1; k < 8; ++k) {
        const double l = k / 8.0;
        const double lhs = f(l * x1 + (1 - l) * x2, l * y1 + (1 - l) * y2);
        const double rhs = std::max(f(x1, y1), f(x2, y2));
        if (lhs - rhs > violation_tolerance(lhs, rhs)) ++violations;
      }
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("negative controls produce witnesses") {
  const Verdict neg = check_membership(parse("-x^2", 2), kSquare, ClassId::JQC2);
  const Witness& w = witness_of(neg);
  CHECK(w.margin >= 1);
  CHECK(w.p1.x == -1);
  CHECK(w.p2.x == 1);
  CHECK(w.p1.y == w.p2.y);
  CHECK(is_sound(parse("-x^2", 2), w));

  const Verdict root = check_membership(parse("sqrt(abs(x))", 2), kSquare, ClassId::C2);
  CHECK(is_sound(parse("sqrt(abs(x))", 2), witness_of(root)));
}

TEST_CASE("undefined functions get their own verdict") {
  const Verdict v = check_membership(parse("sqrt(x)", 2), kSquare, ClassId::QC2);
  REQUIRE(std::holds_alternative<Undefined>(v));
  CHECK(std::get<Undefined>(v).point.x < 0);
  CHECK_FALSE(is_clear(v));
  CHECK_FALSE(is_violated(v));
  const Verdict c = check_membership(parse("log(y)", 2), kUnit, ClassId::CoordQC2);
  REQUIRE(std::holds_alternative<Undefined>(c));
  CHECK(std::get<Undefined>(c).arity == 2);
  CHECK(std::get<Undefined>(c).point.y == 0);
}

TEST_CASE("coordinate check examples") {
  CHECK(is_clear(coordinate_check(parse("x^2+y^2", 2), kUnit, ClassId::QC1, 9)));

  const Expr saddle = parse("x*y", 2);
  CHECK(is_clear(coordinate_check(saddle, kSquare, ClassId::C1, 9)));
  const Sides global = defining_inequality(ClassId::C2, saddle, {-1, 1}, {1, -1}, with_t(0.5));
  CHECK(global.lhs - global.rhs > violation_tolerance(global.lhs, global.rhs));
  CHECK(is_violated(check_membership(saddle, kSquare, ClassId::C2)));

  const Expr neg = parse("-x^2", 2);
  for (const Box2& box : {kSquare, Box2{Interval(-3, 2), Interval(5, 6)}}) {
    const Verdict v = coordinate_check(neg, box, ClassId::JQC1, 9);
    const Witness& w = witness_of(v);
    REQUIRE(w.slice.has_value());
    CHECK(w.slice->axis == Axis::Y);
    CHECK(is_sound(neg, w));
  }
}

TEST_CASE("lifting slice witnesses") {
  const Expr neg = parse("-x^2", 2);
  Witness w;
  w.cls = ClassId::JQC1;
  w.p1 = {-1, 0};
  w.p2 = {1, 0};
  w.params = with_t(0.5);
  const Sides s = defining_inequality(ClassId::JQC1, restrict(neg, Axis::Y, 0), w.p1, w.p2, w.params);
  w.lhs = s.lhs;
  w.rhs = s.rhs;
  w.margin = s.lhs - s.rhs;
  w.terms = s.terms;
  w.f1 = s.f1;
  w.f2 = s.f2;
  w.slice = SliceRef{Axis::Y, 0};
  REQUIRE(is_sound(neg, w));
  const Witness lifted = lift_witness(w);
  CHECK(lifted.cls == ClassId::JQC2);
  CHECK(lifted.p1 == Point{-1, 0});
  CHECK(lifted.p2 == Point{1, 0});
  CHECK(lifted.margin == w.margin);
  CHECK(is_sound(neg, lifted));

  // Quasi-convex slice witness keeps lambda.
  const Expr bump = parse("-(y-0.2)^2 + x", 2);
  const Witness& qc = witness_of(coordinate_check(bump, kSquare, ClassId::QC1, 5));
  const Witness qc2 = lift_witness(qc);
  CHECK(qc2.cls == ClassId::QC2);
  CHECK(qc2.params.t == qc.params.t);
  CHECK(is_sound(bump, qc2));

  // Wright slice witness on a frozen x becomes a rectangle witness.
  const Expr wave = parse("sin(3*y) + x^2", 2);
  const Witness& w1 = witness_of(coordinate_check(wave, kSquare, ClassId::W1, 5));
  REQUIRE(w1.slice.has_value());
  CHECK(w1.params.delta.has_value());
  const Witness w2 = lift_witness(w1);
  CHECK(w2.cls == ClassId::W2);
  CHECK(w2.params.s.has_value());
  CHECK(w2.lhs == w1.lhs);
  CHECK(w2.rhs == w1.rhs);
  CHECK(w2.margin == w1.margin);
  CHECK(is_sound(wave, w2));
  if (w1.slice->axis == Axis::X) {
    CHECK(w2.p1.x == w1.slice->frozen);
    CHECK(w2.p2.x == w1.slice->frozen);
  }

  Witness no_slice = w;
  no_slice.slice.reset();
  CHECK_THROWS_AS(lift_witness(no_slice), std::invalid_argument);
}

TEST_CASE("strengthening moves witnesses down the quasi chain") {
  const Expr neg = parse("-x^2", 2);
  const Witness& jqc = witness_of(check_membership(neg, kSquare, ClassId::JQC2));
  const Witness wqc = strengthen_witness(jqc);
  CHECK(wqc.cls == ClassId::WQC2);
  CHECK(wqc.params.t == 0.5);
  CHECK(wqc.margin == jqc.margin);
  CHECK(is_sound(neg, wqc));
  const Witness qc = strengthen_witness(wqc);
  CHECK(qc.cls == ClassId::QC2);
  CHECK(qc.margin >= wqc.margin);
  CHECK(is_sound(neg, qc));

  Witness abstract;
  abstract.cls = ClassId::WQC2;
  abstract.params = with_t(0.7);
  abstract.terms = {3, 1};
  abstract.lhs = 2;
  abstract.rhs = 1.5;
  abstract.margin = 0.5;
  const Witness pig = strengthen_witness(abstract);
  CHECK(pig.cls == ClassId::QC2);
  CHECK(pig.lhs == 3);
  CHECK(pig.margin == 1.5);
  CHECK(pig.params.t == 0.7);
  abstract.terms = {1, 3};
  CHECK(strengthen_witness(abstract).params.t == doctest::Approx(0.3));

  CHECK_THROWS_AS(strengthen_witness(qc), NotApplicable);
  Witness convex = qc;
  convex.cls = ClassId::C2;
  CHECK_THROWS_AS(strengthen_witness(convex), NotApplicable);

  const Expr line = parse("-abs(x)", 1);
  const Witness& j1 = witness_of(check_membership(line, Interval(-1, 1), ClassId::JQC1));
  const Witness w1 = strengthen_witness(j1);
  CHECK(w1.cls == ClassId::WQC1);
  CHECK(is_sound(line, w1));
  CHECK(is_sound(line, strengthen_witness(w1)));
}

TEST_CASE("affine functions meet the convex-type inequalities with equality") {
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3), c = rng.uniform(-3, 3);
    const Expr f2 = parse(format_number(a) + "*x + " + format_number(b) + "*y + " + format_number(c), 2);
    const Expr f1 = parse(format_number(a) + "*x + " + format_number(c), 1);
    for (int i = 0; i < 1000 / 5; ++i) {
      Params p;
      p.t = rng.uniform();
      p.s = rng.uniform();
      const Point u{rng.uniform(-1, 1), rng.uniform(-1, 1)}, v{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      for (ClassId cls : {ClassId::C2, ClassId::J2, ClassId::W2}) {
        const Sides s = defining_inequality(cls, f2, u, v, p);
        CHECK(std::fabs(s.lhs - s.rhs) <= 1e-12 * std::max(1.0, std::fabs(s.rhs)));
      }
      Params p1;
      p1.t = 0.5 + rng.uniform() / 2;
      for (ClassId cls : {ClassId::C1, ClassId::J1, ClassId::W1}) {
        const Sides s = defining_inequality(cls, f1, {std::min(u.x, v.x), 0}, {std::max(u.x, v.x), 0}, p1);
        CHECK(std::fabs(s.lhs - s.rhs) <= 1e-12 * std::max(1.0, std::fabs(s.rhs)));
      }
    }
  }
}

TEST_CASE("quasi-class margins scale with the function") {
  SearchBudget budget;
  budget.grid_side = 9;
  budget.lds_samples = 512;
  for (const char* text : {"-x^2-y^2", "sin(3*x)*cos(2*y)", "x^3+y^3"}) {
    const Expr f = parse(text, 2);
    for (double c : {4.0, 0.125}) {
      const Expr g = parse(format_number(c) + "*(" + std::string(text) + ")", 2);
      for (ClassId cls : {ClassId::QC2, ClassId::JQC2, ClassId::WQC2}) {
        CAPTURE(text);
        CAPTURE(c);
        const Witness& a = witness_of(check_membership(f, kSquare, cls, budget));
        const Witness& b = witness_of(check_membership(g, kSquare, cls, budget));
        CHECK(b.margin == c * a.margin);
        CHECK(b.p1 == a.p1);
        CHECK(b.p2 == a.p2);
        CHECK(b.params.t == a.params.t);
      }
    }
  }
}

TEST_CASE("ordered and all-pairs rectangle Wright classes differ") {
  const Expr f = parse("exp(x+y)", 2);
  const Verdict all = check_membership(f, kUnit, ClassId::W2);
  CHECK(is_sound(f, witness_of(all)));
  CHECK(is_clear(check_membership(f, kUnit, ClassId::W2Ordered)));
  CHECK(is_violated(check_membership(parse("max(x,y)", 2), kSquare, ClassId::W2Ordered)));
}

TEST_CASE("search is reproducible and every witness is sound") {
  const char* functions[] = {"sin(4*x)*y", "abs(x-0.3)-abs(y+0.2)", "floor(2*x+y)", "x*y^2",
                             "max(x^2,y)-0.5*x"};
  for (const char* text : functions) {
    const Expr f = parse(text, 2);
    for (ClassId cls : all_classes()) {
      if (arity_of(cls) != 2) continue;
      SearchBudget budget;
      budget.grid_side = 9;
      budget.lds_samples = 512;
      budget.seed = 99;
      const Verdict a = check_membership(f, kSquare, cls, budget);
      const Verdict b = check_membership(f, kSquare, cls, budget);
      CAPTURE(text);
      CAPTURE(to_string(cls));
      REQUIRE(a.index() == b.index());
      if (is_violated(a)) {
        const Witness& wa = std::get<Violated>(a).witness;
        const Witness& wb = std::get<Violated>(b).witness;
        CHECK(wa.p1 == wb.p1);
        CHECK(wa.p2 == wb.p2);
        CHECK(wa.margin == wb.margin);
        CHECK(is_sound(f, wa));
        CHECK(wa.margin > violation_tolerance(wa.lhs, wa.rhs));
        if (wa.slice) CHECK(is_sound(f, lift_witness(wa)));
      }
    }
  }
}

TEST_CASE("budget validation") {
  SearchBudget bad;
  bad.grid_side = 1;
  CHECK_THROWS_AS(check_membership(parse("x", 2), kUnit, ClassId::QC2, bad), std::invalid_argument);
  CHECK_THROWS_AS(check_membership(parse("x", 1), kUnit, ClassId::QC2), std::invalid_argument);
  CHECK_THROWS_AS(check_membership(parse("x", 2), kUnit, ClassId::QC1), std::invalid_argument);
}
