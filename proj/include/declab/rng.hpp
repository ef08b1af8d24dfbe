#pragma once

#include <cstdint>

namespace declab {

// splitmix64; identical stream on every platform, unlike std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1) with 53 random bits
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [0,n) without modulo bias (rejection)
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::uint64_t state_;
};

// counter-based split: task seeds depend only on (global_seed, index),
// never on scheduling order.
inline std::uint64_t split_seed(std::uint64_t global_seed, std::uint64_t index) {
  Rng mix(global_seed ^ (0xa0761d6478bd642fULL + index * 0xe7037ed1a0b428dbULL));
  return mix.next_u64();
}

}  // namespace declab
