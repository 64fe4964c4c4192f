#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace pufsim {

using BitGrid = Eigen::Array<uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// Balanced binary macro-pixel illumination pattern.
struct Challenge {
  int m = 0;
  BitGrid bits;  // m x m, values 0/1
  uint64_t seed = 0;
  bool balanced = false;

  int64_t on_count() const { return static_cast<int64_t>(bits.cast<int64_t>().sum()); }
};

Challenge generate_challenge(int m, uint64_t seed);

// Inverts exactly n_flips distinct macro-pixels; the balanced flag is
// recomputed on the result.
Challenge flip_pixels(const Challenge& c, int n_flips, uint64_t seed);

}  // namespace pufsim
