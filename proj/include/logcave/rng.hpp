#ifndef LOGCAVE_RNG_HPP
#define LOGCAVE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace logcave {

// Deterministic random source. The engine is std::mt19937_64 (its output
// sequence is pinned by the standard) and all variate transforms are done
// here rather than through std::*_distribution, whose algorithms are
// implementation-defined. Identical seeds therefore give identical streams
// on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  // Independent stream for replicate r of a seeded experiment.
  static Rng for_replicate(std::uint64_t seed, std::uint64_t r) {
    return Rng(mix(seed) + 0x9e3779b97f4a7c15ULL * (r + 1));
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double u01_positive() { return 1.0 - u01(); }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  // Standard normal via Box-Muller (cached second variate).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = u01_positive();
    double v = u01();
    double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(6.283185307179586477 * v);
    has_spare_ = true;
    return r * std::cos(6.283185307179586477 * v);
  }

  double exponential(double rate = 1.0) { return -std::log(u01_positive()) / rate; }

  std::uint64_t bits() { return engine_(); }

private:
  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer; decorrelates small consecutive seeds
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace logcave

#endif
