#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace entrokl {

// splitmix64 finalizer; the basis of all seed derivation in this library.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Deterministic seed for a unit of work identified by up to three indices.
// Every module derives its per-point / per-rep seeds through this, so results
// are independent of thread count and scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

// mt19937_64 engine with hand-rolled variate transforms. The engine output is
// fixed by the C++ standard and the transforms below are explicit formulas,
// so streams are reproducible across compilers and platforms.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Standard normal via Box-Muller; caches the second variate.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Exponential with the given rate via inverse CDF.
  double exponential(double rate) {
    return -std::log(1.0 - uniform01()) / rate;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace entrokl
