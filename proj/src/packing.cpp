#include "pufsim/packing.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "pufsim/errors.hpp"
#include "pufsim/rng.hpp"

namespace pufsim {

std::string to_string(GeneratorTag tag) {
  switch (tag) {
    case GeneratorTag::kRsa: return "RSA";
    case GeneratorTag::kLs: return "LS";
    case GeneratorTag::kDerived: return "derived";
  }
  return "derived";
}

GeneratorTag generator_tag_from_string(const std::string& s) {
  if (s == "RSA") return GeneratorTag::kRsa;
  if (s == "LS") return GeneratorTag::kLs;
  if (s == "derived") return GeneratorTag::kDerived;
  throw ConfigError("unknown generator tag: " + s);
}

uint64_t mask_id(const PufMask& mask) {
  auto mix_in = [](uint64_t h, uint64_t v) {
    return SplitRng::mix(h ^ (v + 0x9e3779b97f4a7c15ull));
  };
  auto bits = [](double v) {
    uint64_t u;
    static_assert(sizeof(u) == sizeof(v));
    std::memcpy(&u, &v, sizeof(u));
    return u;
  };
  uint64_t h = 0x5bf03635f0e4a1b3ull;
  h = mix_in(h, bits(mask.side_um));
  h = mix_in(h, bits(mask.radius_nm));
  h = mix_in(h, mask.periodic ? 1 : 0);
  h = mix_in(h, mask.seed);
  h = mix_in(h, static_cast<uint64_t>(mask.tag));
  for (int64_t i = 0; i < mask.centers.rows(); ++i) {
    h = mix_in(h, bits(mask.centers(i, 0)));
    h = mix_in(h, bits(mask.centers(i, 1)));
  }
  return h;
}

}  // namespace pufsim

namespace pufsim::packing {

namespace {

constexpr double kPi = std::numbers::pi;

int64_t target_count(double side_um, double radius_nm, double fp) {
  const double r = radius_nm * 1e-3;
  return std::llround(fp * side_um * side_um / (kPi * r * r));
}

// Uniform grid of cells over the wrap period; cell width >= min_dist so a
// 3x3 neighborhood bounds every pair within min_dist.
class CellList {
 public:
  CellList(double period, double min_dist, bool periodic)
      : period_(period), periodic_(periodic) {
    m_ = std::max<int64_t>(1, static_cast<int64_t>(std::floor(period / min_dist)));
    if (m_ < 3) m_ = 1;  // degenerate: single cell, scan everything
    width_ = period / static_cast<double>(m_);
    cells_.assign(static_cast<size_t>(m_ * m_), {});
  }

  int64_t cell_of(double x, double y) const {
    auto idx = [&](double v) {
      int64_t i = static_cast<int64_t>(std::floor(v / width_));
      if (i < 0) i = 0;
      if (i >= m_) i = m_ - 1;
      return i;
    };
    return idx(x) * m_ + idx(y);
  }

  void insert(double x, double y, int32_t id) {
    cells_[static_cast<size_t>(cell_of(x, y))].push_back(id);
  }

  template <typename Fn>
  void for_neighbors(double x, double y, Fn&& fn) const {
    if (m_ == 1) {
      for (int32_t id : cells_[0]) fn(id);
      return;
    }
    const int64_t ci = std::min<int64_t>(m_ - 1, static_cast<int64_t>(std::floor(x / width_)));
    const int64_t cj = std::min<int64_t>(m_ - 1, static_cast<int64_t>(std::floor(y / width_)));
    for (int64_t di = -1; di <= 1; ++di) {
      int64_t i = ci + di;
      if (periodic_) {
        i = (i + m_) % m_;
      } else if (i < 0 || i >= m_) {
        continue;
      }
      for (int64_t dj = -1; dj <= 1; ++dj) {
        int64_t j = cj + dj;
        if (periodic_) {
          j = (j + m_) % m_;
        } else if (j < 0 || j >= m_) {
          continue;
        }
        for (int32_t id : cells_[static_cast<size_t>(i * m_ + j)]) fn(id);
      }
    }
  }

 private:
  double period_;
  double width_;
  int64_t m_;
  bool periodic_;
  std::vector<std::vector<int32_t>> cells_;
};

double wrap_delta(double d, double period) {
  if (d > 0.5 * period) return d - period;
  if (d < -0.5 * period) return d + period;
  return d;
}

}  // namespace

PufMask generate_rsa(double side_um, double radius_nm, double fp_target,
                     uint64_t seed, bool periodic, int64_t failure_cap) {
  const double r = radius_nm * 1e-3;
  if (side_um <= 4.0 * r) throw ConfigError("generate_rsa: L must exceed 4r");
  if (fp_target < 0.0 || fp_target > 1.0)
    throw ConfigError("generate_rsa: packing fraction outside [0, 1]");

  const int64_t n = target_count(side_um, radius_nm, fp_target);
  const int64_t lattice = lattice_size(side_um);
  const double period = static_cast<double>(lattice) * kPosQuantum;

  PufMask mask;
  mask.side_um = side_um;
  mask.radius_nm = radius_nm;
  mask.periodic = periodic;
  mask.seed = seed;
  mask.tag = GeneratorTag::kRsa;
  mask.centers.resize(n, 2);
  if (n == 0) return mask;

  const double min_d2 = 4.0 * r * r;
  CellList cells(period, 2.0 * r, periodic);
  SplitRng rng(seed, 0);

  int64_t placed = 0;
  int64_t consecutive_failures = 0;
  while (placed < n) {
    const double x = static_cast<double>(rng.next_below(static_cast<uint64_t>(lattice))) * kPosQuantum;
    const double y = static_cast<double>(rng.next_below(static_cast<uint64_t>(lattice))) * kPosQuantum;
    bool ok = true;
    cells.for_neighbors(x, y, [&](int32_t id) {
      if (!ok) return;
      double dx = mask.centers(id, 0) - x;
      double dy = mask.centers(id, 1) - y;
      if (periodic) {
        dx = wrap_delta(dx, period);
        dy = wrap_delta(dy, period);
      }
      if (dx * dx + dy * dy < min_d2) ok = false;
    });
    if (!ok) {
      if (++consecutive_failures > failure_cap)
        throw SaturationUnreachable(
            "generate_rsa: insertion failure cap reached at " +
            std::to_string(placed) + " of " + std::to_string(n) + " discs");
      continue;
    }
    mask.centers(placed, 0) = x;
    mask.centers(placed, 1) = y;
    cells.insert(x, y, static_cast<int32_t>(placed));
    ++placed;
    consecutive_failures = 0;
  }
  return mask;
}

PufMask perturb(const PufMask& mask, const PerturbationSpec& spec) {
  if (spec.magnitude < 0.0) throw ConfigError("perturb: magnitude must be >= 0");

  const int64_t lattice = lattice_size(mask.side_um);
  const double period = static_cast<double>(lattice) * kPosQuantum;
  auto wrap_lattice = [&](double v) {
    int64_t k = static_cast<int64_t>(std::nearbyint(v / kPosQuantum)) % lattice;
    if (k < 0) k += lattice;
    return static_cast<double>(k) * kPosQuantum;
  };

  PufMask out = mask;
  out.tag = GeneratorTag::kDerived;
  out.seed = spec.seed;

  switch (spec.kind) {
    case PerturbKind::kJitter: {
      const double sigma = spec.magnitude * 1e-3;  // nm -> um
      for (int64_t i = 0; i < mask.centers.rows(); ++i) {
        SplitRng rng(spec.seed, static_cast<uint64_t>(i));
        const double dx = sigma * rng.next_normal();
        const double dy = sigma * rng.next_normal();
        out.centers(i, 0) = wrap_lattice(mask.centers(i, 0) + dx);
        out.centers(i, 1) = wrap_lattice(mask.centers(i, 1) + dy);
      }
      return out;
    }
    case PerturbKind::kRemove:
    case PerturbKind::kRemoveAdd: {
      if (mask.count() == 0) throw ConfigError("perturb: remove on empty mask");
      if (spec.magnitude > 1.0) throw ConfigError("perturb: remove fraction > 1");
      const int64_t n = mask.count();
      const int64_t k = std::llround(spec.magnitude * static_cast<double>(n));
      // Partial Fisher-Yates to pick k distinct victims.
      std::vector<int64_t> idx(static_cast<size_t>(n));
      for (int64_t i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
      SplitRng rng(spec.seed, 0);
      for (int64_t i = 0; i < k; ++i) {
        const int64_t j = i + static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(n - i)));
        std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
      }
      std::vector<bool> removed(static_cast<size_t>(n), false);
      for (int64_t i = 0; i < k; ++i) removed[static_cast<size_t>(idx[static_cast<size_t>(i)])] = true;

      const int64_t kept = n - k;
      const int64_t total = spec.kind == PerturbKind::kRemoveAdd ? n : kept;
      out.centers.resize(total, 2);
      int64_t w = 0;
      for (int64_t i = 0; i < n; ++i) {
        if (removed[static_cast<size_t>(i)]) continue;
        out.centers.row(w++) = mask.centers.row(i);
      }
      if (spec.kind == PerturbKind::kRemoveAdd) {
        SplitRng add_rng(spec.seed, 1);
        for (int64_t i = 0; i < k; ++i) {
          out.centers(w, 0) =
              static_cast<double>(add_rng.next_below(static_cast<uint64_t>(lattice))) * kPosQuantum;
          out.centers(w, 1) =
              static_cast<double>(add_rng.next_below(static_cast<uint64_t>(lattice))) * kPosQuantum;
          ++w;
        }
      }
      return out;
    }
    case PerturbKind::kShift: {
      if (!mask.periodic)
        throw NonPeriodicShift("perturb: shift requires a periodic mask");
      // Exact lattice shift: round-half-even keeps shift(d) + shift(1-d) == K.
      const int64_t ks = static_cast<int64_t>(
          std::nearbyint(spec.magnitude * static_cast<double>(lattice)));
      const double s = static_cast<double>(ks % lattice) * kPosQuantum;
      for (int64_t i = 0; i < mask.centers.rows(); ++i) {
        double x = mask.centers(i, 0) + s;
        if (x >= period) x -= period;
        out.centers(i, 0) = x;
        out.centers(i, 1) = mask.centers(i, 1);
      }
      return out;
    }
    case PerturbKind::kRadius:
      throw UnsupportedPerturbation(
          "perturb: radius changes go through regenerate_radius");
  }
  throw ConfigError("perturb: unknown kind");
}

PufMask regenerate_radius(double side_um, double fp_target, double radius_new_nm,
                          uint64_t seed, bool periodic) {
  if (fp_target > 0.5) return generate_ls(side_um, radius_new_nm, fp_target, seed);
  return generate_rsa(side_um, radius_new_nm, fp_target, seed, periodic);
}

double packing_fraction(const PufMask& mask) {
  const double r = mask.radius_um();
  return static_cast<double>(mask.count()) * kPi * r * r / (mask.side_um * mask.side_um);
}

double min_pair_distance(const PufMask& mask) {
  const int64_t n = mask.count();
  if (n < 2) return std::numeric_limits<double>::infinity();
  const double period = mask.period_um();

  auto scan = [&](double width) {
    double best = std::numeric_limits<double>::infinity();
    CellList cells(period, width, mask.periodic);
    for (int64_t i = 0; i < n; ++i)
      cells.insert(mask.centers(i, 0), mask.centers(i, 1), static_cast<int32_t>(i));
    for (int64_t i = 0; i < n; ++i) {
      cells.for_neighbors(mask.centers(i, 0), mask.centers(i, 1), [&](int32_t j) {
        if (j <= i) return;
        double dx = mask.centers(j, 0) - mask.centers(i, 0);
        double dy = mask.centers(j, 1) - mask.centers(i, 1);
        if (mask.periodic) {
          dx = wrap_delta(dx, period);
          dy = wrap_delta(dy, period);
        }
        best = std::min(best, std::sqrt(dx * dx + dy * dy));
      });
    }
    return best;
  };

  // A neighbor scan at cell width w is exhaustive for pairs closer than w,
  // so a result <= w is the true minimum; otherwise widen and rescan.
  double width = std::max(4.0 * mask.radius_um(), period / 512.0);
  for (;;) {
    const double best = scan(width);
    if (best <= width) return best;
    if (width >= period) return best;
    width = std::min(period, std::isinf(best) ? 2.0 * width : best * 1.001);
  }
}

std::string to_string(PerturbKind kind) {
  switch (kind) {
    case PerturbKind::kJitter: return "jitter";
    case PerturbKind::kRemove: return "remove";
    case PerturbKind::kRemoveAdd: return "remove_add";
    case PerturbKind::kShift: return "shift";
    case PerturbKind::kRadius: return "radius";
  }
  return "jitter";
}

PerturbKind perturb_kind_from_string(const std::string& s) {
  if (s == "jitter") return PerturbKind::kJitter;
  if (s == "remove") return PerturbKind::kRemove;
  if (s == "remove_add") return PerturbKind::kRemoveAdd;
  if (s == "shift") return PerturbKind::kShift;
  if (s == "radius") return PerturbKind::kRadius;
  throw ConfigError("unknown perturbation kind: " + s);
}

}  // namespace pufsim::packing
