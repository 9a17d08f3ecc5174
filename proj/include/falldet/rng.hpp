#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace falldet {

// Self-contained generator so that shuffles and synthetic data do not depend
// on the standard library's (implementation-defined) distributions. Every
// seeded run reproduces bit-identically on any platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, bound), bound > 0 (Lemire's method).
  uint64_t next_below(uint64_t bound) {
    while (true) {
      uint64_t x = next();
      __uint128_t m = static_cast<__uint128_t>(x) * bound;
      uint64_t lo = static_cast<uint64_t>(m);
      if (lo >= bound || lo >= (-bound) % bound) return static_cast<uint64_t>(m >> 64);
    }
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller without the cached spare; one normal per two uniforms.
  double normal(double mean = 0.0, double stddev = 1.0) {
    double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(6.283185307179586476925287 * u2);
  }

  bool coin(double p) { return uniform01() < p; }

 private:
  uint64_t state_;
};

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Named-stream seed derivation: each consumer hashes (seed, index, purpose),
// so adding a new randomized stage never perturbs existing streams.
inline uint64_t derive_seed(uint64_t base, uint64_t index, std::string_view purpose) {
  Rng mix(base ^ fnv1a64(purpose));
  uint64_t a = mix.next();
  Rng mix2(a ^ (index * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL));
  return mix2.next();
}

inline std::vector<size_t> random_permutation(size_t n, Rng& rng) {
  std::vector<size_t> p(n);
  for (size_t i = 0; i < n; ++i) p[i] = i;
  for (size_t i = n; i > 1; --i) {
    size_t j = static_cast<size_t>(rng.next_below(i));
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

}  // namespace falldet
