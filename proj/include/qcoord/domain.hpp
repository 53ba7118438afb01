#ifndef QCOORD_DOMAIN_HPP
#define QCOORD_DOMAIN_HPP

#include <stdexcept>
#include <string>
#include <variant>

namespace qcoord {

/// Closed interval [lo, hi] with lo < hi.
class Interval {
 public:
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo < hi)) {
      throw std::invalid_argument("interval requires lo < hi, got [" +
                                  std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
    }
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double length() const { return hi_ - lo_; }
  double midpoint() const { return (lo_ + hi_) / 2; }
  bool contains(double v) const { return lo_ <= v && v <= hi_; }

  /// Point k of n equally spaced points including both ends (n >= 2).
  double grid_point(int k, int n) const {
    if (k == n - 1) return hi_;
    return lo_ + (hi_ - lo_) * k / (n - 1);
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
};

/// The rectangle [a,b] x [c,d].
struct Box2 {
  Interval x;
  Interval y;

  friend bool operator==(const Box2&, const Box2&) = default;
};

using Domain = std::variant<Interval, Box2>;

inline int arity_of(const Domain& d) {
  return std::holds_alternative<Interval>(d) ? 1 : 2;
}

/// A point of the plane; 1D points leave y at zero.
struct Point {
  double x = 0;
  double y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Which co-ordinate a partial mapping freezes. Axis::X freezes x and leaves
/// v -> f(x0, v); Axis::Y freezes y and leaves u -> f(u, y0).
enum class Axis { X, Y };

inline const char* to_string(Axis a) { return a == Axis::X ? "x" : "y"; }

}  // namespace qcoord

#endif  // QCOORD_DOMAIN_HPP
