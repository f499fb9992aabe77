#pragma once

#include <cstdint>
#include <random>

namespace fbounds {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream key for task (a, b) under a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(master) ^ a) ^ (b * 0xd6e8feb86659fd93ULL));
}

/// mt19937_64 with portable bounded draws (std distributions are
/// implementation-defined, so they would break cross-platform determinism).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }

  /// Uniform k-bit mask, k <= 64.
  std::uint64_t bits(int k) {
    if (k == 0) return 0;
    const std::uint64_t x = engine_();
    return k >= 64 ? x : (x >> (64 - k));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fbounds
