#ifndef QCOORD_INEQUALITIES_HPP
#define QCOORD_INEQUALITIES_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcoord/domain.hpp"
#include "qcoord/expr.hpp"
#include "qcoord/quadrature.hpp"

namespace qcoord {

/// Hadamard-type inequalities the toolkit can evaluate. The CLI tokens are
/// given by to_string.
enum class InequalityId {
  HermiteHadamard,        // HH1D: f(mid) <= mean <= (f(a)+f(b))/2
  JensenQuasiBound,       // JQC1D: f(mid) <= mean + I(a,b)
  WrightQuasiBound,       // WQC1D: mean <= max{f(a), f(b)}
  CoordinatedChain,       // CHAIN1_6: five-term chain on a rectangle
  CoordJensenQuasiBound,  // THM_2_1: mid-line means vs double mean + H
  CoordWrightQuasiBound,  // THM_2_4: double mean vs averaged edge-mean maxima
};

std::string_view to_string(InequalityId id);
std::optional<InequalityId> inequality_from_string(std::string_view name);
int arity_of(InequalityId id);

/// Slack below which a link counts as failed.
inline constexpr double kVerificationTolerance = 1e-6;

struct Term {
  std::string name;
  double value = 0;
};

/// Terms of a chain t0 <= t1 <= ... with the slack of every link.
struct InequalityReport {
  std::string id;
  std::vector<Term> terms;
  /// slacks[i] = terms[i+1] - terms[i]
  std::vector<double> slacks;
  /// holds[i] iff slacks[i] >= -kVerificationTolerance
  std::vector<bool> holds;
  /// Named intermediate quantities (means, I, H, ...).
  std::vector<Term> details;
  /// One-sided component inequalities reported on their own.
  std::vector<InequalityReport> parts;
  /// Error estimates of the integral means entering the terms.
  std::vector<double> quad_errors;
  bool converged = true;

  bool all_hold() const;
  std::optional<double> detail(std::string_view name) const;
};

/// Builds slacks and holds from the terms.
InequalityReport make_chain(std::string id, std::vector<Term> terms);

InequalityReport hadamard_1d(const Expr& f, Interval iv, const QuadConfig& cfg = {});
InequalityReport jqc_bound_1d(const Expr& f, Interval iv, const QuadConfig& cfg = {});
InequalityReport wqc_bound_1d(const Expr& f, Interval iv, const QuadConfig& cfg = {});
InequalityReport coord_convex_chain(const Expr& f, const Box2& box, const QuadConfig& cfg = {});
InequalityReport thm_jqc_coord(const Expr& f, const Box2& box, const QuadConfig& cfg = {});
InequalityReport thm_wqc_coord(const Expr& f, const Box2& box, const QuadConfig& cfg = {});

/// Dispatches on the id; throws std::invalid_argument when the domain's
/// dimension does not match.
InequalityReport evaluate_inequality(InequalityId id, const Expr& f, const Domain& domain,
                                     const QuadConfig& cfg = {});

/// (u + v + |u - v|) / 2. The absolute value is resolved by sign, after which
/// the smaller argument cancels exactly; the result is the larger argument,
/// bit-identical to std::max and free of overflow.
double max_identity(double u, double v);

}  // namespace qcoord

#endif  // QCOORD_INEQUALITIES_HPP
