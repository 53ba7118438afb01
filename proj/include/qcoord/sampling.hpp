#ifndef QCOORD_SAMPLING_HPP
#define QCOORD_SAMPLING_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace qcoord {

std::uint64_t splitmix64(std::uint64_t x);

/// Radical inverse of `index` in `base`: the Halton co-ordinate.
double radical_inverse(std::uint64_t index, unsigned base);

/// Halton points in up to 8 dimensions with an optional Cranley-Patterson
/// rotation. Seed 0 gives the plain sequence.
class HaltonSequence {
 public:
  HaltonSequence(int dims, std::uint64_t seed);

  /// Point number `index` (index 0 is skipped by callers: it is the origin).
  std::vector<double> point(std::uint64_t index) const;
  int dims() const { return static_cast<int>(shift_.size()); }

 private:
  std::vector<double> shift_;
};

/// mt19937_64 with portable conversions (the standard distributions are
/// implementation-defined, which would break seed reproducibility).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal by Box-Muller.
  double normal();
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qcoord

#endif  // QCOORD_SAMPLING_HPP
