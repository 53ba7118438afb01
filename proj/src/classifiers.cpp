#include "qcoord/classifiers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "qcoord/sampling.hpp"

namespace qcoord {

namespace {

// Convex combination w*a + (1-w)*b, exact when both ends agree so that a
// frozen co-ordinate stays frozen.
double mix(double a, double b, double w) { return a == b ? a : w * a + (1 - w) * b; }

Point mix(Point p, Point q, double w) { return {mix(p.x, q.x, w), mix(p.y, q.y, w)}; }

struct LineFn {
  const Expr& f;
  double operator()(Point p) const { return f(p.x); }
};

struct PlaneFn {
  const Expr& f;
  double operator()(Point p) const { return f(p.x, p.y); }
};

template <class F>
Sides evaluate(ClassId cls, const F& f, Point p1, Point p2, const Params& prm,
               double f1, double f2) {
  Sides s;
  s.f1 = f1;
  s.f2 = f2;
  const double t = prm.t;
  switch (family_of(cls)) {
    case Family::Convex: {
      const double m = f(mix(p1, p2, t));
      s.terms = {m};
      s.lhs = m;
      s.rhs = t * f1 + (1 - t) * f2;
      break;
    }
    case Family::Jensen: {
      const double m = f(mix(p1, p2, 0.5));
      s.terms = {m};
      s.lhs = m;
      s.rhs = (f1 + f2) / 2;
      break;
    }
    case Family::Quasi: {
      const double m = f(mix(p1, p2, t));
      s.terms = {m};
      s.lhs = m;
      s.rhs = std::max(f1, f2);
      break;
    }
    case Family::JensenQuasi: {
      const double m = f(mix(p1, p2, 0.5));
      s.terms = {m};
      s.lhs = m;
      s.rhs = std::max(f1, f2);
      break;
    }
    case Family::WrightQuasi: {
      const double a = f(mix(p1, p2, t));
      const double b = f(mix(p1, p2, 1 - t));
      s.terms = {a, b};
      s.lhs = (a + b) / 2;
      s.rhs = std::max(f1, f2);
      break;
    }
    case Family::Wright: {
      double a = 0, b = 0;
      if (scope_of(cls) == Scope::Line) {
        a = f(mix(p1, p2, t));
        b = f(mix(p1, p2, 1 - t));
      } else {
        if (!prm.s) throw std::invalid_argument("rectangle Wright class needs parameter s");
        const double sw = *prm.s;
        a = f(Point{mix(p1.x, p2.x, 1 - t), mix(p1.y, p2.y, 1 - sw)});
        b = f(Point{mix(p1.x, p2.x, t), mix(p1.y, p2.y, sw)});
      }
      s.terms = {a, b};
      s.lhs = a + b;
      s.rhs = f1 + f2;
      break;
    }
  }
  return s;
}

void require_params(ClassId cls, const Params& prm) {
  auto in_unit = [](double v) { return v >= 0 && v <= 1; };
  if (!in_unit(prm.t)) throw std::invalid_argument("parameter t must lie in [0, 1]");
  if (prm.s && !in_unit(*prm.s)) throw std::invalid_argument("parameter s must lie in [0, 1]");
  if (family_of(cls) == Family::Wright && scope_of(cls) == Scope::Plane && !prm.s) {
    throw std::invalid_argument("rectangle Wright class needs parameter s");
  }
}

void check_budget(const SearchBudget& b) {
  if (b.grid_side < 2) throw std::invalid_argument("grid side must be at least 2");
  if (b.param_side < 3) throw std::invalid_argument("parameter grid side must be at least 3");
  if (b.lds_samples < 0 || b.refine_iterations < 0) {
    throw std::invalid_argument("sample counts must be non-negative");
  }
}

// Golden-section ascent for one parameter; returns the best value seen.
template <class M>
std::pair<double, double> golden_max(const M& margin_at, double lo, double hi,
                                     int iterations, long& samples) {
  const double inv_phi = 1 / std::numbers::phi;
  double a = lo, b = hi;
  double c = b - (b - a) * inv_phi;
  double d = a + (b - a) * inv_phi;
  double mc = margin_at(c), md = margin_at(d);
  samples += 2;
  double best_v = mc >= md ? c : d;
  double best_m = std::max(mc, md);
  for (int i = 0; i < iterations; ++i) {
    if (mc >= md) {
      b = d;
      d = c;
      md = mc;
      c = b - (b - a) * inv_phi;
      mc = margin_at(c);
      if (mc > best_m) {
        best_m = mc;
        best_v = c;
      }
    } else {
      a = c;
      c = d;
      mc = md;
      d = a + (b - a) * inv_phi;
      md = margin_at(d);
      if (md > best_m) {
        best_m = md;
        best_v = d;
      }
    }
    ++samples;
  }
  return {best_v, best_m};
}

struct Range {
  double lo;
  double hi;
};

// Parameter ranges searched per class. The Wright-type t-forms are symmetric
// under t -> 1 - t, so only t >= 1/2 is visited.
std::optional<Range> t_range(ClassId cls) {
  switch (family_of(cls)) {
    case Family::Convex:
    case Family::Quasi: return Range{0, 1};
    case Family::WrightQuasi: return Range{0.5, 1};
    case Family::Wright:
      return scope_of(cls) == Scope::Line ? Range{0.5, 1} : Range{0, 1};
    default: return std::nullopt;
  }
}

bool has_s(ClassId cls) {
  return family_of(cls) == Family::Wright && scope_of(cls) == Scope::Plane;
}

std::vector<Params> parameter_grid(ClassId cls, int side) {
  std::vector<double> v(static_cast<std::size_t>(side));
  for (int k = 0; k < side; ++k) v[k] = (k == side - 1) ? 1.0 : static_cast<double>(k) / (side - 1);
  std::vector<Params> out;
  switch (family_of(cls)) {
    case Family::Convex:
    case Family::Quasi:
      for (int k = 1; k + 1 < side; ++k) out.push_back(Params{v[k], {}, {}});
      break;
    case Family::Jensen:
    case Family::JensenQuasi:
      out.push_back(Params{0.5, {}, {}});
      break;
    case Family::WrightQuasi:
      for (double t : v) {
        if (t >= 0.5 && t < 1) out.push_back(Params{t, {}, {}});
      }
      break;
    case Family::Wright:
      if (scope_of(cls) == Scope::Line) {
        for (double t : v) {
          if (t >= 0.5 && t < 1) out.push_back(Params{t, {}, {}});
        }
      } else {
        // (t, s) and (1-t, 1-s) exchange the two mixed points.
        for (double t : v) {
          for (double s : v) {
            if (t > 0.5 || (t == 0.5 && s >= 0.5)) out.push_back(Params{t, s, {}});
          }
        }
      }
      break;
  }
  return out;
}

int parameter_dims(ClassId cls) {
  if (has_s(cls)) return 2;
  return t_range(cls) ? 1 : 0;
}

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

// Searches one interval or rectangle class. `F` maps a Point to f's value.
template <class F>
class Falsifier {
 public:
  Falsifier(ClassId cls, F f, Interval xs, std::optional<Interval> ys,
            const SearchBudget& budget)
      : cls_(cls), f_(f), xs_(xs), ys_(ys), budget_(budget) {}

  Verdict run() {
    try {
      grid_pass();
      lds_pass();
      if (!best_) return NoViolationFound{budget_.grid_side, samples_, budget_.seed};
      refine();
      return Violated{finish(), samples_};
    } catch (const DomainError& e) {
      return Undefined{e.point(), e.arity(), e.what()};
    }
  }

 private:
  struct Best {
    Point p1, p2;
    Params prm;
    double margin;
  };

  bool planar() const { return ys_.has_value(); }

  void consider(Point p1, Point p2, const Params& prm, double f1, double f2) {
    const Sides s = evaluate(cls_, f_, p1, p2, prm, f1, f2);
    ++samples_;
    const double margin = s.lhs - s.rhs;
    if (margin > violation_tolerance(s.lhs, s.rhs) && (!best_ || margin > best_->margin)) {
      best_ = Best{p1, p2, prm, margin};
    }
  }

  void grid_pass() {
    const int n = budget_.grid_side;
    std::vector<Point> pts;
    if (planar()) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) pts.push_back({xs_.grid_point(i, n), ys_->grid_point(j, n)});
      }
    } else {
      for (int i = 0; i < n; ++i) pts.push_back({xs_.grid_point(i, n), 0});
    }
    // Probe totality on the grid before anything else.
    std::vector<double> fv(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) fv[k] = f_(pts[k]);

    const std::vector<Params> grid = parameter_grid(cls_, budget_.param_side);
    const bool ordered_only = cls_ == ClassId::W2Ordered;
    for (std::size_t k1 = 0; k1 < pts.size(); ++k1) {
      for (std::size_t k2 = k1 + 1; k2 < pts.size(); ++k2) {
        if (ordered_only && pts[k1].y > pts[k2].y) continue;
        for (const Params& prm : grid) consider(pts[k1], pts[k2], prm, fv[k1], fv[k2]);
      }
    }
  }

  void lds_pass() {
    if (budget_.lds_samples == 0) return;
    const int point_dims = planar() ? 4 : 2;
    const int dims = point_dims + parameter_dims(cls_);
    const HaltonSequence seq(dims, budget_.seed);
    const auto tr = t_range(cls_);
    for (int idx = 1; idx <= budget_.lds_samples; ++idx) {
      const std::vector<double> h = seq.point(static_cast<std::uint64_t>(idx));
      Point p1, p2;
      if (planar()) {
        p1 = {xs_.lo() + xs_.length() * h[0], ys_->lo() + ys_->length() * h[1]};
        p2 = {xs_.lo() + xs_.length() * h[2], ys_->lo() + ys_->length() * h[3]};
        if (cls_ == ClassId::W2Ordered) {
          if (p1.x > p2.x) std::swap(p1.x, p2.x);
          if (p1.y > p2.y) std::swap(p1.y, p2.y);
        }
      } else {
        p1 = {xs_.lo() + xs_.length() * h[0], 0};
        p2 = {xs_.lo() + xs_.length() * h[1], 0};
        if (family_of(cls_) == Family::Wright && p1.x > p2.x) std::swap(p1, p2);
      }
      if (p1 == p2) continue;
      Params prm;
      if (tr) prm.t = tr->lo + (tr->hi - tr->lo) * h[point_dims];
      if (has_s(cls_)) prm.s = h[point_dims + 1];
      consider(p1, p2, prm, f_(p1), f_(p2));
    }
  }

  void refine() {
    if (budget_.refine_iterations == 0) return;
    const double f1 = f_(best_->p1), f2 = f_(best_->p2);
    auto margin_with = [&](const Params& prm) {
      const Sides s = evaluate(cls_, f_, best_->p1, best_->p2, prm, f1, f2);
      const double m = s.lhs - s.rhs;
      return m > violation_tolerance(s.lhs, s.rhs) ? m
                                                   : -std::numeric_limits<double>::infinity();
    };
    if (const auto tr = t_range(cls_)) {
      Params trial = best_->prm;
      const auto [v, m] = golden_max(
          [&](double t) {
            trial.t = t;
            return margin_with(trial);
          },
          tr->lo, tr->hi, budget_.refine_iterations, samples_);
      if (m > best_->margin) {
        best_->prm.t = v;
        best_->margin = m;
      }
    }
    if (has_s(cls_)) {
      Params trial = best_->prm;
      const auto [v, m] = golden_max(
          [&](double s) {
            trial.s = s;
            return margin_with(trial);
          },
          0.0, 1.0, budget_.refine_iterations, samples_);
      if (m > best_->margin) {
        best_->prm.s = v;
        best_->margin = m;
      }
    }
  }

  Witness finish() const {
    Witness w;
    w.cls = cls_;
    w.p1 = best_->p1;
    w.p2 = best_->p2;
    w.params = best_->prm;
    if (family_of(cls_) == Family::Wright && !planar()) {
      w.params.delta = (1 - w.params.t) * (w.p2.x - w.p1.x);
    }
    const Sides s = evaluate(cls_, f_, w.p1, w.p2, w.params, f_(w.p1), f_(w.p2));
    w.lhs = s.lhs;
    w.rhs = s.rhs;
    w.margin = s.lhs - s.rhs;
    w.terms = s.terms;
    w.f1 = s.f1;
    w.f2 = s.f2;
    return w;
  }

  ClassId cls_;
  F f_;
  Interval xs_;
  std::optional<Interval> ys_;
  SearchBudget budget_;
  std::optional<Best> best_;
  long samples_ = 0;
};

Verdict check_line(const Expr& f, Interval iv, ClassId cls, const SearchBudget& b) {
  return Falsifier<LineFn>(cls, LineFn{f}, iv, std::nullopt, b).run();
}

}  // namespace

double violation_tolerance(double lhs, double rhs) {
  return 1e-9 * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
}

Sides defining_inequality(ClassId cls, const Expr& f, Point p1, Point p2,
                          const Params& params) {
  require_params(cls, params);
  switch (scope_of(cls)) {
    case Scope::Line: {
      if (f.arity() != 1) throw std::invalid_argument("interval class needs a function of x");
      const LineFn g{f};
      return evaluate(cls, g, p1, p2, params, g(p1), g(p2));
    }
    case Scope::Plane: {
      if (f.arity() != 2) throw std::invalid_argument("rectangle class needs a function of x and y");
      const PlaneFn g{f};
      return evaluate(cls, g, p1, p2, params, g(p1), g(p2));
    }
    case Scope::Coordinates: break;
  }
  throw std::invalid_argument(std::string(to_string(cls)) +
                              " is checked through its partial mappings");
}

std::string describe(const Verdict& v) {
  std::ostringstream os;
  if (const auto* n = std::get_if<NoViolationFound>(&v)) {
    os << "no violation found at resolution " << n->resolution << " (" << n->samples
       << " samples, seed " << n->seed << ")";
  } else if (const auto* x = std::get_if<Violated>(&v)) {
    const Witness& w = x->witness;
    os << "violated: lhs " << format_number(w.lhs) << " > rhs " << format_number(w.rhs)
       << " (margin " << format_number(w.margin) << ")";
  } else {
    os << "undefined: " << std::get<Undefined>(v).message;
  }
  return os.str();
}

Verdict check_membership(const Expr& f, const Domain& domain, ClassId cls,
                         const SearchBudget& budget) {
  check_budget(budget);
  const Scope scope = scope_of(cls);
  if (scope == Scope::Line) {
    const auto* iv = std::get_if<Interval>(&domain);
    if (!iv || f.arity() != 1) {
      throw std::invalid_argument(std::string(to_string(cls)) +
                                  " needs a function of x on an interval");
    }
    return check_line(f, *iv, cls, budget);
  }
  const auto* box = std::get_if<Box2>(&domain);
  if (!box || f.arity() != 2) {
    throw std::invalid_argument(std::string(to_string(cls)) +
                                " needs a function of x and y on a rectangle");
  }
  if (scope == Scope::Coordinates) {
    return coordinate_check(f, *box, slice_class(cls), budget.grid_side, budget);
  }
  return Falsifier<PlaneFn>(cls, PlaneFn{f}, box->x, box->y, budget).run();
}

Verdict coordinate_check(const Expr& f, const Box2& box, ClassId line_class, int slices,
                         const SearchBudget& budget) {
  check_budget(budget);
  if (scope_of(line_class) != Scope::Line) {
    throw std::invalid_argument("coordinate_check takes an interval class");
  }
  if (f.arity() != 2) throw std::invalid_argument("coordinate_check needs a function of x and y");
  if (slices < 1) throw std::invalid_argument("need at least one slice");

  long samples = 0;
  std::optional<Witness> best;
  for (Axis axis : {Axis::X, Axis::Y}) {
    const Interval frozen_range = axis == Axis::X ? box.x : box.y;
    const Interval free_range = axis == Axis::X ? box.y : box.x;
    for (int k = 0; k < slices; ++k) {
      const double frozen =
          slices == 1 ? frozen_range.midpoint() : frozen_range.grid_point(k, slices);
      const Expr slice = restrict(f, axis, frozen);
      const Verdict v = check_line(slice, free_range, line_class, budget);
      if (const auto* u = std::get_if<Undefined>(&v)) {
        const Point p = axis == Axis::X ? Point{frozen, u->point.x} : Point{u->point.x, frozen};
        std::ostringstream os;
        os << u->message << " (partial mapping " << to_string(axis) << " = "
           << format_number(frozen) << ")";
        return Undefined{p, 2, os.str()};
      }
      if (const auto* n = std::get_if<NoViolationFound>(&v)) {
        samples += n->samples;
        continue;
      }
      const auto& x = std::get<Violated>(v);
      samples += x.samples;
      if (!best || x.witness.margin > best->margin) {
        best = x.witness;
        best->slice = SliceRef{axis, frozen};
      }
    }
  }
  if (best) return Violated{*best, samples};
  return NoViolationFound{budget.grid_side, samples, budget.seed};
}

bool is_sound(const Expr& f, const Witness& w) {
  Sides s;
  if (w.slice) {
    if (scope_of(w.cls) != Scope::Line) return false;
    s = defining_inequality(w.cls, restrict(f, w.slice->axis, w.slice->frozen), w.p1, w.p2,
                            w.params);
  } else {
    s = defining_inequality(w.cls, f, w.p1, w.p2, w.params);
  }
  return same_bits(s.lhs, w.lhs) && same_bits(s.rhs, w.rhs) &&
         same_bits(s.lhs - s.rhs, w.margin) && w.margin > violation_tolerance(w.lhs, w.rhs);
}

Witness lift_witness(const Witness& w, Axis axis, double frozen) {
  if (scope_of(w.cls) != Scope::Line) {
    throw std::invalid_argument("only interval-class witnesses can be lifted");
  }
  Witness out = w;
  out.cls = global_class(w.cls);
  out.slice.reset();
  out.params.delta.reset();
  if (axis == Axis::X) {
    out.p1 = {frozen, w.p1.x};
    out.p2 = {frozen, w.p2.x};
  } else {
    out.p1 = {w.p1.x, frozen};
    out.p2 = {w.p2.x, frozen};
  }
  if (family_of(w.cls) == Family::Wright) {
    if (w.params.t < 0.5) {
      throw std::invalid_argument("Wright witnesses are lifted from the form with t >= 1/2");
    }
    // The slice's t-form reappears with (t, s) = (t, 1 - t) or (1 - t, t);
    // both subtractions are exact for t in [1/2, 1].
    const double t = w.params.t;
    if (axis == Axis::X) {
      out.params.t = t;
      out.params.s = 1 - t;
    } else {
      out.params.t = 1 - t;
      out.params.s = t;
    }
  }
  return out;
}

Witness lift_witness(const Witness& w) {
  if (!w.slice) throw std::invalid_argument("witness does not record a partial mapping");
  return lift_witness(w, w.slice->axis, w.slice->frozen);
}

Witness strengthen_witness(const Witness& w) {
  const Family fam = family_of(w.cls);
  const Scope scope = scope_of(w.cls);
  if (scope == Scope::Coordinates ||
      (fam != Family::JensenQuasi && fam != Family::WrightQuasi)) {
    throw NotApplicable(std::string("no stronger witness derives from ") +
                        std::string(to_string(w.cls)));
  }
  if (w.terms.empty() || (fam == Family::WrightQuasi && w.terms.size() < 2)) {
    throw std::invalid_argument("witness is missing its term values");
  }
  Witness out = w;
  out.params.s.reset();
  out.params.delta.reset();
  if (fam == Family::JensenQuasi) {
    out.cls = scope == Scope::Line ? ClassId::WQC1 : ClassId::WQC2;
    out.params.t = 0.5;
    const double m = w.terms[0];
    out.terms = {m, m};
    out.lhs = (m + m) / 2;
  } else {
    out.cls = scope == Scope::Line ? ClassId::QC1 : ClassId::QC2;
    const bool first = w.terms[0] >= w.terms[1];
    out.params.t = first ? w.params.t : 1 - w.params.t;
    out.terms = {first ? w.terms[0] : w.terms[1]};
    out.lhs = out.terms[0];
  }
  out.margin = out.lhs - out.rhs;
  return out;
}

}  // namespace qcoord
