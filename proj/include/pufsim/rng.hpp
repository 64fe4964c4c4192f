#pragma once

#include <cmath>
#include <cstdint>

namespace pufsim {

// Counter-based random stream. Every draw is a pure function of
// (key, counter), so values assigned to item i never depend on how many
// draws other items consumed. Streams for sub-tasks are derived with
// derive_seed, which is a bijection on the counter for a fixed key.
class SplitRng {
 public:
  SplitRng(uint64_t seed, uint64_t stream) noexcept
      : key_(mix(seed ^ 0x9e3779b97f4a7c15ull * stream) ^ stream) {}

  explicit SplitRng(uint64_t seed) noexcept : SplitRng(seed, 0) {}

  static uint64_t mix(uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  uint64_t next_u64() noexcept { return mix(key_ + 0x9e3779b97f4a7c15ull * ++ctr_); }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), unbiased (rejection).
  uint64_t next_below(uint64_t n) noexcept {
    const uint64_t lim = n * ((~uint64_t{0}) / n);
    uint64_t v;
    do {
      v = next_u64();
    } while (v >= lim);
    return v % n;
  }

  // Standard normal via Box-Muller; pairs share two uniform draws.
  double next_normal() noexcept {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    if (u1 <= 0x1.0p-60) u1 = 0x1.0p-60;
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 6.283185307179586477 * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

 private:
  uint64_t key_;
  uint64_t ctr_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Seed fan-out: child streams are keyed by (master, tag, index). Used for
// per-challenge, per-grid-point and per-perturbation sub-seeds so that
// extending a parameter grid never reshuffles existing draws.
inline uint64_t derive_seed(uint64_t master, uint64_t tag, uint64_t index) noexcept {
  return SplitRng::mix(SplitRng::mix(master ^ 0xd1b54a32d192ed03ull * tag) +
                       0x9e3779b97f4a7c15ull * index);
}

}  // namespace pufsim
