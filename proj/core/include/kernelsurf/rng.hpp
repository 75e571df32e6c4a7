#pragma once

#include <cmath>
#include <cstdint>

namespace kernelsurf {

// Counter-based generator: draw i is a SplitMix64-style hash of (seed, i).
// Same seed -> same sequence on every platform; no hidden global state.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + counter_ * 0x9e3779b97f4a7c15ull;
    ++counter_;
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // [0, n)
  std::uint64_t uniform_index(std::uint64_t n) {
    // 64-bit hash output is uniform enough for modulo at our n
    return next_u64() % n;
  }

  // Standard normal via Box-Muller; second value of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // avoid log(0)
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace kernelsurf
