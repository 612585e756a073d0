#pragma once

#include <cmath>
#include <cstdint>

#include "wulff/vec.hpp"

namespace wulff {

// SplitMix64. Self-contained so seeded runs serialize byte-identically:
// std::random distributions make no such promise.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0, n)
  int uniform_int(int n) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  double gaussian() {
    // Box-Muller; one value per call keeps the stream simple.
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  Vec unit_vector(int dim) {
    for (;;) {
      Vec v(gaussian(), gaussian(), dim == 3 ? gaussian() : 0.0);
      double n = norm(v);
      if (n > 1e-8) return v / n;
    }
  }

  // Deterministic per-sample stream: mixing (seed, index) this way keeps
  // sample i identical whether 500 or 1000 samples are drawn.
  static Rng derive(std::uint64_t seed, std::uint64_t index) {
    Rng mixer(seed ^ (0x5851f42d4c957f2dULL * (index + 1)));
    return Rng(mixer.next_u64());
  }

 private:
  std::uint64_t state_;
};

}  // namespace wulff
