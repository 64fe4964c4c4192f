#include "pufsim/challenge.hpp"

#include <vector>

#include "pufsim/errors.hpp"
#include "pufsim/rng.hpp"

namespace pufsim {

Challenge generate_challenge(int m, uint64_t seed) {
  if (m < 2 || m % 2 != 0) throw OddM("generate_challenge: M must be even and >= 2");
  Challenge c;
  c.m = m;
  c.seed = seed;
  c.balanced = true;
  c.bits = BitGrid::Zero(m, m);
  // Partial Fisher-Yates: choose M^2/2 "on" cells uniformly.
  const int64_t total = static_cast<int64_t>(m) * m;
  std::vector<int32_t> idx(static_cast<size_t>(total));
  for (int64_t i = 0; i < total; ++i) idx[static_cast<size_t>(i)] = static_cast<int32_t>(i);
  SplitRng rng(seed, 0);
  const int64_t k = total / 2;
  for (int64_t i = 0; i < k; ++i) {
    const int64_t j = i + static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(total - i)));
    std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
    c.bits(idx[static_cast<size_t>(i)] / m, idx[static_cast<size_t>(i)] % m) = 1;
  }
  return c;
}

Challenge flip_pixels(const Challenge& c, int n_flips, uint64_t seed) {
  const int64_t total = static_cast<int64_t>(c.m) * c.m;
  if (n_flips < 0 || n_flips > total)
    throw TooManyFlips("flip_pixels: n_flips outside [0, M^2]");
  Challenge out = c;
  std::vector<int32_t> idx(static_cast<size_t>(total));
  for (int64_t i = 0; i < total; ++i) idx[static_cast<size_t>(i)] = static_cast<int32_t>(i);
  SplitRng rng(seed, 0);
  for (int64_t i = 0; i < n_flips; ++i) {
    const int64_t j = i + static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(total - i)));
    std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
    auto& b = out.bits(idx[static_cast<size_t>(i)] / c.m, idx[static_cast<size_t>(i)] % c.m);
    b = static_cast<uint8_t>(1 - b);
  }
  out.balanced = out.on_count() * 2 == total;
  return out;
}

}  // namespace pufsim
