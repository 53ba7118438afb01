#ifndef QCOORD_QUADRATURE_HPP
#define QCOORD_QUADRATURE_HPP

#include <functional>
#include <span>

#include "qcoord/domain.hpp"
#include "qcoord/expr.hpp"

namespace qcoord {

struct QuadConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdivisions = 4096;
  bool kink_split = true;  // used by integrate_abs_difference
};

struct QuadResult {
  double value = 0;
  double abs_error_estimate = 0;
  int subdivisions = 1;
  bool converged = true;
};

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

/// Adaptive 15-point Gauss-Kronrod quadrature with bisection of the segment
/// carrying the largest error estimate. `breakpoints` seed the initial
/// partition (points outside the open interval are ignored). When the budget
/// runs out the best estimate is returned with converged == false.
QuadResult integrate_1d(const Fn1& f, Interval iv, const QuadConfig& cfg = {},
                        std::span<const double> breakpoints = {});
QuadResult integrate_1d(const Expr& f, Interval iv, const QuadConfig& cfg = {});

/// Tensor-product Gauss-Kronrod on rectangles; each refinement bisects the
/// worst rectangle along the axis whose embedded estimate is larger.
QuadResult integrate_2d(const Fn2& f, const Box2& box, const QuadConfig& cfg = {});
QuadResult integrate_2d(const Expr& f, const Box2& box, const QuadConfig& cfg = {});

/// Number of uniform grid points scanned for sign changes of g - h.
inline constexpr int kKinkScanPoints = 257;
/// Width to which each bracketed sign change is bisected.
inline constexpr double kKinkRootWidth = 1e-12;

/// Integral of |g - h| over `iv`, without any prefactor. Sign changes of
/// g - h found on a uniform scan are bisected and used as breakpoints so that
/// each adaptive segment sees a smooth integrand.
QuadResult integrate_abs_difference(const Fn1& g, const Fn1& h, Interval iv,
                                    const QuadConfig& cfg = {});

/// Breakpoints used by integrate_abs_difference: sorted, strictly inside iv.
std::vector<double> kink_breakpoints(const Fn1& g, const Fn1& h, Interval iv);

}  // namespace qcoord

#endif  // QCOORD_QUADRATURE_HPP
