#ifndef QCOORD_FAMILIES_HPP
#define QCOORD_FAMILIES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "qcoord/domain.hpp"

namespace qcoord {

/// Sums of `ridges` ridge functions g(cos(a) x + sin(a) y), each g a random
/// continuous piecewise-linear interpolant through `knots` nodes. On an
/// interval the single ridge is g(x).
struct PiecewiseLinear {
  int knots = 4;
  int ridges = 1;
};

/// Random polynomial with all monomials of total degree <= degree.
struct PolynomialBasis {
  int degree = 2;
};

using FunctionFamily = std::variant<PiecewiseLinear, PolynomialBasis>;

/// "pwl4", "pwl4x2" (two ridges), "poly3".
std::string to_string(const FunctionFamily& family);
std::optional<FunctionFamily> family_from_string(std::string_view text);

/// Expression text of member `trial` of the family drawn with `seed`. The
/// text uses only x on an interval and x, y on a rectangle. Pure function
/// of its arguments.
std::string sample_function(const FunctionFamily& family, const Domain& domain,
                            std::uint64_t seed, std::uint64_t trial);

}  // namespace qcoord

#endif  // QCOORD_FAMILIES_HPP
