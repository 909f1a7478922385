#pragma once

#include <cstdint>
#include <random>

#include "lorch/types.hpp"

namespace lorch {

/// Seedable generator used everywhere randomness is needed. mt19937_64 is
/// fully specified by the standard; uniform doubles are produced from the raw
/// 64-bit stream (not std::uniform_real_distribution) so that identical seeds
/// give identical samples on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  Vec uniform_vec(const Vec& lo, const Vec& hi) {
    Vec v(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) v[i] = uniform(lo[i], hi[i]);
    return v;
  }

  Vec uniform_box(int dim, double lo, double hi) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 gen_;
};

/// Mixes coordinates into a seed, for deterministic per-point decisions.
inline std::uint64_t seed_mix(std::uint64_t seed, const Vec& w) {
  auto mix = [](std::uint64_t h, std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  };
  std::uint64_t h = seed;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    std::uint64_t bits;
    double d = w[i];
    static_assert(sizeof(bits) == sizeof(d));
    __builtin_memcpy(&bits, &d, sizeof(bits));
    h = mix(h, bits);
  }
  return h;
}

}  // namespace lorch
