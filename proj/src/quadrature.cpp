#include "qcoord/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace qcoord {

namespace {

// 15-point Kronrod abscissae on [-1, 1] (non-negative half, descending) and
// weights; odd indices are the 7-point Gauss abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

// All 15 nodes in ascending order with Kronrod weights and, for Gauss nodes,
// the Gauss weight (zero otherwise).
struct Rule {
  std::array<double, 15> x;
  std::array<double, 15> wk;
  std::array<double, 15> wg;
};

constexpr Rule make_rule() {
  Rule r{};
  for (int i = 0; i < 7; ++i) {
    r.x[i] = -kXgk[i];
    r.x[14 - i] = kXgk[i];
    r.wk[i] = r.wk[14 - i] = kWgk[i];
    r.wg[i] = r.wg[14 - i] = (i % 2 == 1) ? kWg[i / 2] : 0.0;
  }
  r.x[7] = 0.0;
  r.wk[7] = kWgk[7];
  r.wg[7] = kWg[3];
  return r;
}

constexpr Rule kRule = make_rule();

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool splittable;
};

Segment gauss_kronrod(const Fn1& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::array<double, 15> fv;
  for (int i = 0; i < 15; ++i) {
    // Pin the extreme nodes inside [lo, hi] against rounding.
    fv[i] = f(std::clamp(center + half * kRule.x[i], lo, hi));
  }
  double resk = 0, resg = 0, resabs = 0;
  for (int i = 0; i < 15; ++i) {
    resk += kRule.wk[i] * fv[i];
    resg += kRule.wg[i] * fv[i];
    resabs += kRule.wk[i] * std::fabs(fv[i]);
  }
  const double mean = 0.5 * resk;
  double resasc = 0;
  for (int i = 0; i < 15; ++i) resasc += kRule.wk[i] * std::fabs(fv[i] - mean);

  const double scale = std::fabs(half);
  resabs *= scale;
  resasc *= scale;
  double err = std::fabs((resk - resg) * half);
  if (resasc != 0 && err != 0) {
    err = resasc * std::min(1.0, std::pow(200 * err / resasc, 1.5));
  }
  if (resabs > kTiny / (50 * kEps)) err = std::max(50 * kEps * resabs, err);
  const bool splittable = lo < center && center < hi;
  return Segment{lo, hi, resk * half, err, splittable};
}

double tolerance(const QuadConfig& cfg, double value) {
  return std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(value));
}

void validate(const QuadConfig& cfg) {
  if (!(cfg.rel_tol > 0) || !(cfg.abs_tol > 0) || cfg.max_subdivisions < 1) {
    throw std::invalid_argument("quadrature tolerances must be positive");
  }
}

template <class Piece>
QuadResult summarize(std::vector<Piece>& pieces, bool converged) {
  // Fixed summation order keeps results independent of refinement history.
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
    return a.key() < b.key();
  });
  QuadResult r;
  for (const Piece& p : pieces) {
    r.value += p.value;
    r.abs_error_estimate += p.error;
  }
  r.subdivisions = static_cast<int>(pieces.size());
  r.converged = converged;
  return r;
}

struct Piece1 : Segment {
  std::pair<double, double> key() const { return {lo, hi}; }
};

}  // namespace

QuadResult integrate_1d(const Fn1& f, Interval iv, const QuadConfig& cfg,
                        std::span<const double> breakpoints) {
  validate(cfg);
  std::vector<double> cuts{iv.lo()};
  for (double b : breakpoints) {
    if (b > iv.lo() && b < iv.hi()) cuts.push_back(b);
  }
  cuts.push_back(iv.hi());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Piece1> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    pieces.push_back(Piece1{gauss_kronrod(f, cuts[i], cuts[i + 1])});
  }

  auto by_error = [&](std::size_t a, std::size_t b) {
    if (pieces[a].error != pieces[b].error) return pieces[a].error < pieces[b].error;
    return a > b;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_error)>
      heap(by_error);
  double total = 0, total_err = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    total += pieces[i].value;
    total_err += pieces[i].error;
    if (pieces[i].splittable) heap.push(i);
  }

  while (total_err > tolerance(cfg, total) &&
         static_cast<int>(pieces.size()) < cfg.max_subdivisions && !heap.empty()) {
    const std::size_t worst = heap.top();
    heap.pop();
    const Segment old = pieces[worst];
    const double mid = 0.5 * (old.lo + old.hi);
    const Segment left = gauss_kronrod(f, old.lo, mid);
    const Segment right = gauss_kronrod(f, mid, old.hi);
    total += left.value + right.value - old.value;
    total_err += left.error + right.error - old.error;
    pieces[worst] = Piece1{left};
    pieces.push_back(Piece1{right});
    if (left.splittable) heap.push(worst);
    if (right.splittable) heap.push(pieces.size() - 1);
  }

  QuadResult r = summarize(pieces, false);
  r.converged = r.abs_error_estimate <= tolerance(cfg, r.value);
  return r;
}

QuadResult integrate_1d(const Expr& f, Interval iv, const QuadConfig& cfg) {
  if (f.arity() != 1) throw std::invalid_argument("integrate_1d needs a function of x");
  return integrate_1d([&f](double x) { return f(x); }, iv, cfg);
}

namespace {

struct Rect {
  double x0, x1, y0, y1;
  double value;
  double err_x;
  double err_y;
  double error;
  bool splittable_x;
  bool splittable_y;

  std::tuple<double, double, double, double> key() const { return {x0, y0, x1, y1}; }
};

Rect tensor_rule(const Fn2& f, double x0, double x1, double y0, double y1) {
  const double cx = 0.5 * (x0 + x1), hx = 0.5 * (x1 - x0);
  const double cy = 0.5 * (y0 + y1), hy = 0.5 * (y1 - y0);
  std::array<double, 15> ys;
  for (int j = 0; j < 15; ++j) ys[j] = std::clamp(cy + hy * kRule.x[j], y0, y1);

  double kk = 0, gk = 0, kg = 0, kabs = 0;
  for (int i = 0; i < 15; ++i) {
    const double x = std::clamp(cx + hx * kRule.x[i], x0, x1);
    double col_k = 0, col_g = 0, col_abs = 0;
    for (int j = 0; j < 15; ++j) {
      const double v = f(x, ys[j]);
      col_k += kRule.wk[j] * v;
      col_g += kRule.wg[j] * v;
      col_abs += kRule.wk[j] * std::fabs(v);
    }
    kk += kRule.wk[i] * col_k;
    gk += kRule.wg[i] * col_k;
    kg += kRule.wk[i] * col_g;
    kabs += kRule.wk[i] * col_abs;
  }
  const double area = hx * hy;
  const double floor_err = 50 * kEps * std::fabs(area) * kabs;
  Rect r{};
  r.x0 = x0;
  r.x1 = x1;
  r.y0 = y0;
  r.y1 = y1;
  r.value = kk * area;
  r.err_x = std::fabs((kk - gk) * area);
  r.err_y = std::fabs((kk - kg) * area);
  r.error = std::max(r.err_x + r.err_y, floor_err);
  r.splittable_x = x0 < cx && cx < x1;
  r.splittable_y = y0 < cy && cy < y1;
  return r;
}

}  // namespace

QuadResult integrate_2d(const Fn2& f, const Box2& box, const QuadConfig& cfg) {
  validate(cfg);
  std::vector<Rect> rects{
      tensor_rule(f, box.x.lo(), box.x.hi(), box.y.lo(), box.y.hi())};
  auto by_error = [&](std::size_t a, std::size_t b) {
    if (rects[a].error != rects[b].error) return rects[a].error < rects[b].error;
    return a > b;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_error)>
      heap(by_error);
  heap.push(0);
  double total = rects[0].value, total_err = rects[0].error;

  while (total_err > tolerance(cfg, total) &&
         static_cast<int>(rects.size()) < cfg.max_subdivisions && !heap.empty()) {
    const std::size_t worst = heap.top();
    heap.pop();
    const Rect old = rects[worst];
    bool split_x = old.err_x >= old.err_y;
    if (split_x && !old.splittable_x) split_x = false;
    if (!split_x && !old.splittable_y) {
      if (!old.splittable_x) continue;
      split_x = true;
    }
    Rect a, b;
    if (split_x) {
      const double mid = 0.5 * (old.x0 + old.x1);
      a = tensor_rule(f, old.x0, mid, old.y0, old.y1);
      b = tensor_rule(f, mid, old.x1, old.y0, old.y1);
    } else {
      const double mid = 0.5 * (old.y0 + old.y1);
      a = tensor_rule(f, old.x0, old.x1, old.y0, mid);
      b = tensor_rule(f, old.x0, old.x1, mid, old.y1);
    }
    total += a.value + b.value - old.value;
    total_err += a.error + b.error - old.error;
    rects[worst] = a;
    rects.push_back(b);
    heap.push(worst);
    heap.push(rects.size() - 1);
  }

  QuadResult r = summarize(rects, false);
  r.converged = r.abs_error_estimate <= tolerance(cfg, r.value);
  return r;
}

QuadResult integrate_2d(const Expr& f, const Box2& box, const QuadConfig& cfg) {
  if (f.arity() != 2) throw std::invalid_argument("integrate_2d needs a function of x and y");
  return integrate_2d([&f](double x, double y) { return f(x, y); }, box, cfg);
}

std::vector<double> kink_breakpoints(const Fn1& g, const Fn1& h, Interval iv) {
  auto diff = [&](double t) { return g(t) - h(t); };
  std::vector<double> ts(kKinkScanPoints);
  std::vector<double> ds(kKinkScanPoints);
  for (int i = 0; i < kKinkScanPoints; ++i) {
    ts[i] = iv.grid_point(i, kKinkScanPoints);
    ds[i] = diff(ts[i]);
  }
  std::vector<double> cuts;
  for (int i = 0; i < kKinkScanPoints; ++i) {
    if (ds[i] == 0 && i > 0 && i + 1 < kKinkScanPoints) cuts.push_back(ts[i]);
    if (i + 1 == kKinkScanPoints) break;
    if ((ds[i] < 0 && ds[i + 1] > 0) || (ds[i] > 0 && ds[i + 1] < 0)) {
      double lo = ts[i], hi = ts[i + 1];
      const bool lo_negative = ds[i] < 0;
      double root = 0.5 * (lo + hi);
      while (hi - lo > kKinkRootWidth) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double dm = diff(mid);
        if (dm == 0) {
          lo = hi = mid;
          break;
        }
        if ((dm < 0) == lo_negative) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      root = 0.5 * (lo + hi);
      cuts.push_back(root);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

QuadResult integrate_abs_difference(const Fn1& g, const Fn1& h, Interval iv,
                                    const QuadConfig& cfg) {
  std::vector<double> cuts;
  if (cfg.kink_split) cuts = kink_breakpoints(g, h, iv);
  return integrate_1d([&](double t) { return std::fabs(g(t) - h(t)); }, iv, cfg,
                      cuts);
}

}  // namespace qcoord
