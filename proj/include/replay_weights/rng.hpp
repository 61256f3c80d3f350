#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace rw {

// Deterministic random source. Wraps the standard mt19937_64 engine but maps
// raw bits to doubles/integers with fixed arithmetic, so replaying a seed
// reproduces the exact draw sequence independent of library distribution
// internals. Every draw consumes a fixed number of engine steps, which keeps
// parallel run streams comparable across configurations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1), 53-bit resolution
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // uniform integer in [0, n); multiply-shift mapping, one engine step
  std::uint64_t uniform_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // standard normal via Box-Muller, two engine steps per pair
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    // avoid log(0)
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // exponential with unit rate, inverse CDF
  double exponential() {
    double u = uniform01();
    if (u >= 1.0) u = 1.0 - 0x1.0p-53;
    return -std::log1p(-u);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rw
