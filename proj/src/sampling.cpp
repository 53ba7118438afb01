#include "qcoord/sampling.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qcoord {

namespace {
constexpr std::array<unsigned, 8> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

HaltonSequence::HaltonSequence(int dims, std::uint64_t seed) {
  if (dims < 1 || dims > static_cast<int>(kPrimes.size())) {
    throw std::invalid_argument("Halton dimension out of range");
  }
  shift_.assign(static_cast<std::size_t>(dims), 0.0);
  if (seed != 0) {
    std::uint64_t state = seed;
    for (double& s : shift_) {
      state = splitmix64(state);
      s = static_cast<double>(state >> 11) * 0x1.0p-53;
    }
  }
}

std::vector<double> HaltonSequence::point(std::uint64_t index) const {
  std::vector<double> p(shift_.size());
  for (std::size_t d = 0; d < shift_.size(); ++d) {
    double v = radical_inverse(index, kPrimes[d]) + shift_[d];
    if (v >= 1) v -= 1;
    p[d] = v;
  }
  return p;
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 == 0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
}

}  // namespace qcoord
