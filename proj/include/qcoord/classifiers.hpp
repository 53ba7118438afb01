#ifndef QCOORD_CLASSIFIERS_HPP
#define QCOORD_CLASSIFIERS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qcoord/classes.hpp"
#include "qcoord/domain.hpp"
#include "qcoord/expr.hpp"

namespace qcoord {

/// Parameters of a defining inequality. `t` is the convex-combination weight
/// (lambda for C/QC, t for W/WQC; 1/2 for the Jensen classes). `s` is the
/// second weight of the rectangle Wright class. `delta` is informational:
/// the shift of the interval Wright condition f(x+d)+f(y) <= f(y+d)+f(x)
/// equivalent to the stored (p1, p2, t).
struct Params {
  double t = 0.5;
  std::optional<double> s;
  std::optional<double> delta;
};

/// Identifies the partial mapping a co-ordinate witness lives on.
struct SliceRef {
  Axis axis;
  double frozen;
};

/// Both sides of a defining inequality lhs <= rhs, plus the individual
/// evaluations that make up the sides.
struct Sides {
  double lhs = 0;
  double rhs = 0;
  /// f at the interior point(s) entering lhs: one value, or two for the
  /// Wright-type classes.
  std::vector<double> terms;
  /// f(p1), f(p2).
  double f1 = 0;
  double f2 = 0;
};

/// A concrete failure of a defining inequality.
///
/// For interval classes only `x` of p1 and p2 is used. A witness with `slice`
/// set belongs to the partial mapping that freezes slice->axis at
/// slice->frozen; its points are positions along that slice.
struct Witness {
  ClassId cls = ClassId::C1;
  Point p1;
  Point p2;
  Params params;
  double lhs = 0;
  double rhs = 0;
  double margin = 0;
  std::vector<double> terms;
  double f1 = 0;
  double f2 = 0;
  std::optional<SliceRef> slice;
};

/// 1e-9 * max(1, |lhs|, |rhs|): margins at or below this are float noise.
double violation_tolerance(double lhs, double rhs);

/// Evaluates both sides of the defining inequality of an interval or
/// rectangle class (not Coord*, which are checked slice by slice).
///
/// Interval Wright and all Wright-quasi classes use the symmetric t-form;
/// witnesses produced by the search have t in [1/2, 1].
Sides defining_inequality(ClassId cls, const Expr& f, Point p1, Point p2,
                          const Params& params);

struct SearchBudget {
  int grid_side = 17;
  int param_side = 9;
  int lds_samples = 4096;
  int refine_iterations = 50;
  std::uint64_t seed = 0;
};

struct NoViolationFound {
  int resolution = 0;
  long samples = 0;
  std::uint64_t seed = 0;
};

struct Violated {
  Witness witness;
  long samples = 0;
};

/// f raised a DomainError; it is not total on the domain.
struct Undefined {
  Point point;
  int arity = 2;
  std::string message;
};

using Verdict = std::variant<NoViolationFound, Violated, Undefined>;

inline bool is_violated(const Verdict& v) { return std::holds_alternative<Violated>(v); }
inline bool is_clear(const Verdict& v) { return std::holds_alternative<NoViolationFound>(v); }

/// One-line human description; never claims membership.
std::string describe(const Verdict& v);

/// Falsification search for a violation of `cls` by f on `domain`.
///
/// Candidates come from every pair of points of a tensor grid of side
/// grid_side with parameters on a grid of side param_side, then from
/// lds_samples Halton points over the full candidate space. The largest
/// violation (ties: earliest candidate) has its parameters refined by
/// golden-section ascent and is returned. Coord* classes delegate to
/// coordinate_check with grid_side slices per axis.
Verdict check_membership(const Expr& f, const Domain& domain, ClassId cls,
                         const SearchBudget& budget = {});

/// Checks the interval class `line_class` on `slices` equally spaced partial
/// mappings in each direction.
Verdict coordinate_check(const Expr& f, const Box2& box, ClassId line_class,
                         int slices, const SearchBudget& budget = {});

/// Re-evaluates the witness and confirms lhs and rhs are reproduced
/// bit-for-bit with margin above the violation tolerance.
bool is_sound(const Expr& f, const Witness& w);

/// Embeds a slice witness into the rectangle class of the same family. Both
/// points share the frozen co-ordinate, so lhs, rhs and margin carry over.
Witness lift_witness(const Witness& w, Axis axis, double frozen);
Witness lift_witness(const Witness& w);

class NotApplicable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Moves a witness one step down the chain QC subset WQC subset JQC: a JQC
/// witness is a WQC witness at t = 1/2, and a WQC witness yields a QC
/// witness at whichever of t, 1-t has the larger term.
Witness strengthen_witness(const Witness& w);

}  // namespace qcoord

#endif  // QCOORD_CLASSIFIERS_HPP
