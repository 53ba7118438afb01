#include "qcoord/inequalities.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcoord {

namespace {

struct NamedId {
  InequalityId id;
  std::string_view token;
  int arity;
};

constexpr std::array<NamedId, 6> kIds{{
    {InequalityId::HermiteHadamard, "HH1D", 1},
    {InequalityId::JensenQuasiBound, "JQC1D", 1},
    {InequalityId::WrightQuasiBound, "WQC1D", 1},
    {InequalityId::CoordinatedChain, "CHAIN1_6", 2},
    {InequalityId::CoordJensenQuasiBound, "THM_2_1", 2},
    {InequalityId::CoordWrightQuasiBound, "THM_2_4", 2},
}};

struct Mean {
  double value;
  double error;
  bool converged;
};

class Accumulator {
 public:
  explicit Accumulator(InequalityReport& r) : r_(r) {}

  Mean mean_1d(const Fn1& f, Interval iv, const QuadConfig& cfg) {
    const QuadResult q = integrate_1d(f, iv, cfg);
    return record(q, iv.length());
  }

  Mean mean_2d(const Expr& f, const Box2& box, const QuadConfig& cfg) {
    const QuadResult q = integrate_2d(f, box, cfg);
    return record(q, box.x.length() * box.y.length());
  }

  Mean record(const QuadResult& q, double length) {
    r_.quad_errors.push_back(q.abs_error_estimate / length);
    r_.converged = r_.converged && q.converged;
    return Mean{q.value / length, q.abs_error_estimate / length, q.converged};
  }

 private:
  InequalityReport& r_;
};

void require_arity(const Expr& f, int arity) {
  if (f.arity() != arity) {
    throw std::invalid_argument(arity == 1 ? "inequality needs a function of x"
                                           : "inequality needs a function of x and y");
  }
}

QuadConfig inner_config(const QuadConfig& cfg) {
  QuadConfig inner = cfg;
  inner.rel_tol = cfg.rel_tol / 10;
  inner.abs_tol = cfg.abs_tol / 10;
  return inner;
}

// Raw integral over `outer` of the chord-difference integral in the other
// co-ordinate: along_x == true integrates over y of
// int_0^1 |f(ta+(1-t)b, y) - f((1-t)a+tb, y)| dt.
QuadResult chord_difference_integral(const Expr& f, const Box2& box, bool along_x,
                                     const QuadConfig& cfg, bool& inner_converged) {
  const Interval chord = along_x ? box.x : box.y;
  const Interval outer = along_x ? box.y : box.x;
  const double lo = chord.lo(), hi = chord.hi();
  const QuadConfig inner = inner_config(cfg);
  const Interval unit(0, 1);
  auto slice_integral = [&](double w) {
    Fn1 g, h;
    if (along_x) {
      g = [&, w](double t) { return f(t * lo + (1 - t) * hi, w); };
      h = [&, w](double t) { return f((1 - t) * lo + t * hi, w); };
    } else {
      g = [&, w](double t) { return f(w, t * lo + (1 - t) * hi); };
      h = [&, w](double t) { return f(w, (1 - t) * lo + t * hi); };
    }
    const QuadResult q = integrate_abs_difference(g, h, unit, inner);
    inner_converged = inner_converged && q.converged;
    return q.value;
  };
  return integrate_1d(slice_integral, outer, cfg);
}

}  // namespace

std::string_view to_string(InequalityId id) {
  for (const auto& n : kIds) {
    if (n.id == id) return n.token;
  }
  throw std::logic_error("unknown inequality");
}

std::optional<InequalityId> inequality_from_string(std::string_view name) {
  for (const auto& n : kIds) {
    if (n.token == name) return n.id;
  }
  return std::nullopt;
}

int arity_of(InequalityId id) {
  for (const auto& n : kIds) {
    if (n.id == id) return n.arity;
  }
  throw std::logic_error("unknown inequality");
}

bool InequalityReport::all_hold() const {
  return std::all_of(holds.begin(), holds.end(), [](bool b) { return b; });
}

std::optional<double> InequalityReport::detail(std::string_view name) const {
  for (const Term& t : details) {
    if (t.name == name) return t.value;
  }
  return std::nullopt;
}

InequalityReport make_chain(std::string id, std::vector<Term> terms) {
  InequalityReport r;
  r.id = std::move(id);
  r.terms = std::move(terms);
  for (std::size_t i = 0; i + 1 < r.terms.size(); ++i) {
    const double slack = r.terms[i + 1].value - r.terms[i].value;
    r.slacks.push_back(slack);
    r.holds.push_back(slack >= -kVerificationTolerance);
  }
  return r;
}

InequalityReport hadamard_1d(const Expr& f, Interval iv, const QuadConfig& cfg) {
  require_arity(f, 1);
  InequalityReport scratch;
  Accumulator acc(scratch);
  const Mean mean = acc.mean_1d([&f](double x) { return f(x); }, iv, cfg);
  InequalityReport r = make_chain(
      "HH1D", {{"f(midpoint)", f(iv.midpoint())},
               {"mean", mean.value},
               {"endpoint average", (f(iv.lo()) + f(iv.hi())) / 2}});
  r.quad_errors = scratch.quad_errors;
  r.converged = scratch.converged;
  return r;
}

InequalityReport jqc_bound_1d(const Expr& f, Interval iv, const QuadConfig& cfg) {
  require_arity(f, 1);
  InequalityReport scratch;
  Accumulator acc(scratch);
  const Mean mean = acc.mean_1d([&f](double x) { return f(x); }, iv, cfg);
  const double a = iv.lo(), b = iv.hi();
  const QuadResult chords = integrate_abs_difference(
      [&](double t) { return f(t * a + (1 - t) * b); },
      [&](double t) { return f((1 - t) * a + t * b); }, Interval(0, 1), cfg);
  acc.record(chords, 1.0);
  const double i_ab = chords.value / 2;
  InequalityReport r =
      make_chain("JQC1D", {{"f(midpoint)", f(iv.midpoint())}, {"mean + I", mean.value + i_ab}});
  r.details = {{"mean", mean.value}, {"I", i_ab}};
  r.quad_errors = scratch.quad_errors;
  r.converged = scratch.converged;
  return r;
}

InequalityReport wqc_bound_1d(const Expr& f, Interval iv, const QuadConfig& cfg) {
  require_arity(f, 1);
  InequalityReport scratch;
  Accumulator acc(scratch);
  const Mean mean = acc.mean_1d([&f](double x) { return f(x); }, iv, cfg);
  InequalityReport r = make_chain(
      "WQC1D",
      {{"mean", mean.value}, {"max{f(a), f(b)}", std::max(f(iv.lo()), f(iv.hi()))}});
  r.quad_errors = scratch.quad_errors;
  r.converged = scratch.converged;
  return r;
}

InequalityReport coord_convex_chain(const Expr& f, const Box2& box, const QuadConfig& cfg) {
  require_arity(f, 2);
  InequalityReport scratch;
  Accumulator acc(scratch);
  const double a = box.x.lo(), b = box.x.hi(), c = box.y.lo(), d = box.y.hi();
  const double mx = box.x.midpoint(), my = box.y.midpoint();

  const Mean along_mid_y = acc.mean_1d([&](double x) { return f(x, my); }, box.x, cfg);
  const Mean along_mid_x = acc.mean_1d([&](double y) { return f(mx, y); }, box.y, cfg);
  const Mean whole = acc.mean_2d(f, box, cfg);
  const Mean edge_c = acc.mean_1d([&](double x) { return f(x, c); }, box.x, cfg);
  const Mean edge_d = acc.mean_1d([&](double x) { return f(x, d); }, box.x, cfg);
  const Mean edge_a = acc.mean_1d([&](double y) { return f(a, y); }, box.y, cfg);
  const Mean edge_b = acc.mean_1d([&](double y) { return f(b, y); }, box.y, cfg);

  InequalityReport r = make_chain(
      "CHAIN1_6",
      {{"f(center)", f(mx, my)},
       {"mid-line mean average", (along_mid_y.value + along_mid_x.value) / 2},
       {"double mean", whole.value},
       {"edge mean average", (edge_c.value + edge_d.value + edge_a.value + edge_b.value) / 4},
       {"corner average", (f(a, c) + f(b, c) + f(a, d) + f(b, d)) / 4}});
  r.details = {{"mean f(x, (c+d)/2)", along_mid_y.value},
               {"mean f((a+b)/2, y)", along_mid_x.value},
               {"mean f(x, c)", edge_c.value},
               {"mean f(x, d)", edge_d.value},
               {"mean f(a, y)", edge_a.value},
               {"mean f(b, y)", edge_b.value}};
  r.quad_errors = scratch.quad_errors;
  r.converged = scratch.converged;
  return r;
}

InequalityReport thm_jqc_coord(const Expr& f, const Box2& box, const QuadConfig& cfg) {
  require_arity(f, 2);
  InequalityReport scratch;
  Accumulator acc(scratch);
  const double mx = box.x.midpoint(), my = box.y.midpoint();
  const double width = box.x.length(), height = box.y.length();

  const Mean along_mid_y = acc.mean_1d([&](double x) { return f(x, my); }, box.x, cfg);
  const Mean along_mid_x = acc.mean_1d([&](double y) { return f(mx, y); }, box.y, cfg);
  const Mean whole = acc.mean_2d(f, box, cfg);

  bool inner_ok = true;
  const QuadResult x_chords = chord_difference_integral(f, box, true, cfg, inner_ok);
  const QuadResult y_chords = chord_difference_integral(f, box, false, cfg, inner_ok);
  acc.record(x_chords, 4 * height);
  acc.record(y_chords, 4 * width);
  scratch.converged = scratch.converged && inner_ok;

  const double h_x = x_chords.value / (4 * height);
  const double h_y = y_chords.value / (4 * width);
  const double h = h_x + h_y;

  InequalityReport r =
      make_chain("THM_2_1", {{"mid-line mean average", (along_mid_y.value + along_mid_x.value) / 2},
                             {"double mean + H", whole.value + h}});
  r.details = {{"mean f(x, (c+d)/2)", along_mid_y.value},
               {"mean f((a+b)/2, y)", along_mid_x.value},
               {"double mean", whole.value},
               {"H", h},
               {"H x-chords", h_x},
               {"H y-chords", h_y}};
  // The two one-sided bounds whose sum is the chain.
  r.parts.push_back(make_chain("THM_2_1 along x = (a+b)/2",
                               {{"mean f((a+b)/2, y)", along_mid_x.value},
                                {"double mean + 2 H x-chords", whole.value + 2 * h_x}}));
  r.parts.push_back(make_chain("THM_2_1 along y = (c+d)/2",
                               {{"mean f(x, (c+d)/2)", along_mid_y.value},
                                {"double mean + 2 H y-chords", whole.value + 2 * h_y}}));
  r.quad_errors = scratch.quad_errors;
  r.converged = scratch.converged;
  return r;
}

InequalityReport thm_wqc_coord(const Expr& f, const Box2& box, const QuadConfig& cfg) {
  require_arity(f, 2);
  InequalityReport scratch;
  Accumulator acc(scratch);
  const double a = box.x.lo(), b = box.x.hi(), c = box.y.lo(), d = box.y.hi();

  const Mean whole = acc.mean_2d(f, box, cfg);
  const Mean edge_c = acc.mean_1d([&](double x) { return f(x, c); }, box.x, cfg);
  const Mean edge_d = acc.mean_1d([&](double x) { return f(x, d); }, box.x, cfg);
  const Mean edge_a = acc.mean_1d([&](double y) { return f(a, y); }, box.y, cfg);
  const Mean edge_b = acc.mean_1d([&](double y) { return f(b, y); }, box.y, cfg);
  // Means of the pointwise maxima, which always dominate the double mean
  // when every slice satisfies mean <= max of its endpoint values.
  const Mean pointwise_ab =
      acc.mean_1d([&](double y) { return std::max(f(a, y), f(b, y)); }, box.y, cfg);
  const Mean pointwise_cd =
      acc.mean_1d([&](double x) { return std::max(f(x, c), f(x, d)); }, box.x, cfg);

  const double max_cd = std::max(edge_c.value, edge_d.value);
  const double max_ab = std::max(edge_a.value, edge_b.value);

  InequalityReport r = make_chain(
      "THM_2_4", {{"double mean", whole.value},
                  {"half-sum of edge-mean maxima", (max_cd + max_ab) / 2}});
  r.details = {{"double mean", whole.value},
               {"mean f(x, c)", edge_c.value},
               {"mean f(x, d)", edge_d.value},
               {"mean f(a, y)", edge_a.value},
               {"mean f(b, y)", edge_b.value},
               {"mean max{f(a, y), f(b, y)}", pointwise_ab.value},
               {"mean max{f(x, c), f(x, d)}", pointwise_cd.value}};
  r.parts.push_back(make_chain("THM_2_4 edges x = a, x = b",
                               {{"double mean", whole.value},
                                {"max{mean f(a, y), mean f(b, y)}", max_ab}}));
  r.parts.push_back(make_chain("THM_2_4 edges y = c, y = d",
                               {{"double mean", whole.value},
                                {"max{mean f(x, c), mean f(x, d)}", max_cd}}));
  r.quad_errors = scratch.quad_errors;
  r.converged = scratch.converged;
  return r;
}

InequalityReport evaluate_inequality(InequalityId id, const Expr& f, const Domain& domain,
                                     const QuadConfig& cfg) {
  if (arity_of(id) == 1) {
    const auto* iv = std::get_if<Interval>(&domain);
    if (!iv) throw std::invalid_argument(std::string(to_string(id)) + " needs an interval domain");
    switch (id) {
      case InequalityId::HermiteHadamard: return hadamard_1d(f, *iv, cfg);
      case InequalityId::JensenQuasiBound: return jqc_bound_1d(f, *iv, cfg);
      default: return wqc_bound_1d(f, *iv, cfg);
    }
  }
  const auto* box = std::get_if<Box2>(&domain);
  if (!box) throw std::invalid_argument(std::string(to_string(id)) + " needs a rectangle domain");
  switch (id) {
    case InequalityId::CoordinatedChain: return coord_convex_chain(f, *box, cfg);
    case InequalityId::CoordJensenQuasiBound: return thm_jqc_coord(f, *box, cfg);
    default: return thm_wqc_coord(f, *box, cfg);
  }
}

double max_identity(double u, double v) {
  // Same selection rule as std::max, so signed zeros agree too.
  const double larger = (u < v) ? v : u;
  // (larger + smaller + (larger - smaller)) / 2 == (larger + larger) / 2.
  if (std::fabs(larger) <= std::numeric_limits<double>::max() / 2) {
    return (larger + larger) / 2;
  }
  return larger / 2 + larger / 2;
}

}  // namespace qcoord
