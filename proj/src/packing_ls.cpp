#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "pufsim/errors.hpp"
#include "pufsim/packing.hpp"
#include "pufsim/rng.hpp"

namespace pufsim::packing {

namespace {

constexpr double kPi = std::numbers::pi;

struct Event {
  double t;
  int32_t i;
  int32_t j;        // >= 0: pair collision; -1: cell crossing
  uint32_t gi, gj;  // generation stamps at scheduling time
  int8_t axis;      // crossing axis (0/1)
  int8_t dir;       // crossing direction (-1/+1)
  bool operator>(const Event& o) const { return t > o.t; }
};

// Event-driven growth packing on a periodic square. Radii grow linearly in
// time; elastic collisions get an outward boost of twice the growth speed so
// that contacts always reopen.
class GrowthPacker {
 public:
  GrowthPacker(int64_t n, double period, double r_final, uint64_t seed,
               const LsParams& prm)
      : n_(n), period_(period), rf_(r_final), g_(prm.growth_rate), prm_(prm) {
    px_.resize(n_);
    py_.resize(n_);
    vx_.resize(n_);
    vy_.resize(n_);
    tl_.assign(n_, 0.0);
    gen_.assign(n_, 0);
    SplitRng rng(seed, 2);
    for (int64_t k = 0; k < n_; ++k) {
      px_[k] = rng.next_double() * period_;
      py_[k] = rng.next_double() * period_;
      vx_[k] = (2.0 * rng.next_double() - 1.0) * prm.speed;
      vy_[k] = (2.0 * rng.next_double() - 1.0) * prm.speed;
    }
    m_ = std::max<int64_t>(3, static_cast<int64_t>(std::floor(period_ / (2.2 * rf_))));
    w_ = period_ / static_cast<double>(m_);
    cells_.assign(static_cast<size_t>(m_ * m_), {});
    ci_.resize(n_);
    cj_.resize(n_);
    for (int64_t k = 0; k < n_; ++k) {
      ci_[k] = cell_index(px_[k]);
      cj_[k] = cell_index(py_[k]);
      cells_[cell_id(ci_[k], cj_[k])].push_back(static_cast<int32_t>(k));
    }
  }

  void run(double t_end) {
    for (int32_t k = 0; k < n_; ++k) predict(k, 0.0);
    int64_t collisions_in_window = 0;
    double frac_at_window_start = 0.0;
    while (!heap_.empty()) {
      Event e = heap_.top();
      if (e.t > t_end) break;
      heap_.pop();
      if (gen_[e.i] != e.gi) continue;
      if (e.j >= 0 && gen_[e.j] != e.gj) continue;
      if (e.j < 0) {
        process_crossing(e);
      } else {
        process_collision(e);
        if (++collisions_in_window >= prm_.stall_events) {
          const double frac = fraction_at(e.t);
          if (frac - frac_at_window_start < prm_.stall_dfrac)
            throw GrowthStalled("generate_ls: packing stalled at fraction " +
                                std::to_string(frac));
          frac_at_window_start = frac;
          collisions_in_window = 0;
        }
      }
    }
    for (int32_t k = 0; k < n_; ++k) advance(k, t_end);
  }

  double x_of(int64_t k) const { return wrap(px_[k]); }
  double y_of(int64_t k) const { return wrap(py_[k]); }

 private:
  double fraction_at(double t) const {
    const double r = g_ * t;
    return static_cast<double>(n_) * kPi * r * r / (period_ * period_);
  }

  double wrap(double v) const {
    v = std::fmod(v, period_);
    return v < 0.0 ? v + period_ : v;
  }

  int64_t cell_index(double v) const {
    int64_t c = static_cast<int64_t>(std::floor(wrap(v) / w_));
    return std::clamp<int64_t>(c, 0, m_ - 1);
  }

  size_t cell_id(int64_t a, int64_t b) const {
    return static_cast<size_t>(((a + m_) % m_) * m_ + ((b + m_) % m_));
  }

  void advance(int32_t k, double t) {
    px_[k] += vx_[k] * (t - tl_[k]);
    py_[k] += vy_[k] * (t - tl_[k]);
    tl_[k] = t;
  }

  double wrap_delta(double d) const {
    if (d > 0.5 * period_) return d - period_;
    if (d < -0.5 * period_) return d + period_;
    return d;
  }

  // Contact time of discs i, j starting from absolute time t0, or +inf.
  double pair_time(int32_t i, int32_t j, double t0) const {
    const double dt_i = t0 - tl_[i];
    const double dt_j = t0 - tl_[j];
    double dx = wrap_delta((px_[i] + vx_[i] * dt_i) - (px_[j] + vx_[j] * dt_j));
    double dy = wrap_delta((py_[i] + vy_[i] * dt_i) - (py_[j] + vy_[j] * dt_j));
    const double dvx = vx_[i] - vx_[j];
    const double dvy = vy_[i] - vy_[j];
    const double r0 = 2.0 * g_ * t0;  // contact distance at t0
    const double A = dvx * dvx + dvy * dvy - 4.0 * g_ * g_;
    const double B = 2.0 * (dx * dvx + dy * dvy) - 4.0 * g_ * r0;
    const double C = dx * dx + dy * dy - r0 * r0;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    if (C <= 0.0) return B < 0.0 ? 0.0 : kInf;  // numeric grace for touching pairs
    if (A == 0.0) return B < 0.0 ? -C / B : kInf;
    const double disc = B * B - 4.0 * A * C;
    if (A > 0.0) {
      if (B >= 0.0 || disc < 0.0) return kInf;
      return 2.0 * C / (-B + std::sqrt(disc));
    }
    // A < 0: growth outruns separation, contact is inevitable.
    return (-B - std::sqrt(disc)) / (2.0 * A) >= 0.0
               ? (-B - std::sqrt(disc)) / (2.0 * A)
               : 2.0 * C / (-B + std::sqrt(disc));
  }

  void predict(int32_t k, double t_now) {
    // cell crossing
    const double x = px_[k] + vx_[k] * (t_now - tl_[k]);
    const double y = py_[k] + vy_[k] * (t_now - tl_[k]);
    double tx = std::numeric_limits<double>::infinity();
    double ty = std::numeric_limits<double>::infinity();
    int8_t dx_dir = 0, dy_dir = 0;
    if (vx_[k] > 0.0) {
      tx = (static_cast<double>(ci_[k] + 1) * w_ - x) / vx_[k];
      dx_dir = 1;
    } else if (vx_[k] < 0.0) {
      tx = (static_cast<double>(ci_[k]) * w_ - x) / vx_[k];
      dx_dir = -1;
    }
    if (vy_[k] > 0.0) {
      ty = (static_cast<double>(cj_[k] + 1) * w_ - y) / vy_[k];
      dy_dir = 1;
    } else if (vy_[k] < 0.0) {
      ty = (static_cast<double>(cj_[k]) * w_ - y) / vy_[k];
      dy_dir = -1;
    }
    tx = std::max(tx, 0.0);
    ty = std::max(ty, 0.0);
    if (std::isfinite(tx) || std::isfinite(ty)) {
      if (tx <= ty)
        heap_.push({t_now + tx, k, -1, gen_[k], 0, 0, dx_dir});
      else
        heap_.push({t_now + ty, k, -1, gen_[k], 0, 1, dy_dir});
    }
    // pair collisions within the 3x3 neighborhood
    for (int64_t a = ci_[k] - 1; a <= ci_[k] + 1; ++a) {
      for (int64_t b = cj_[k] - 1; b <= cj_[k] + 1; ++b) {
        for (int32_t other : cells_[cell_id(a, b)]) {
          if (other == k) continue;
          const double tau = pair_time(k, other, t_now);
          if (std::isfinite(tau))
            heap_.push({t_now + tau, k, other, gen_[k], gen_[other], 0, 0});
        }
      }
    }
  }

  void process_crossing(const Event& e) {
    const int32_t k = e.i;
    advance(k, e.t);
    auto& cell = cells_[cell_id(ci_[k], cj_[k])];
    cell.erase(std::find(cell.begin(), cell.end(), k));
    if (e.axis == 0) {
      ci_[k] += e.dir;
      if (ci_[k] < 0) {
        ci_[k] = m_ - 1;
        px_[k] += period_;
      } else if (ci_[k] >= m_) {
        ci_[k] = 0;
        px_[k] -= period_;
      }
    } else {
      cj_[k] += e.dir;
      if (cj_[k] < 0) {
        cj_[k] = m_ - 1;
        py_[k] += period_;
      } else if (cj_[k] >= m_) {
        cj_[k] = 0;
        py_[k] -= period_;
      }
    }
    cells_[cell_id(ci_[k], cj_[k])].push_back(k);
    ++gen_[k];
    predict(k, e.t);
  }

  void process_collision(const Event& e) {
    const int32_t i = e.i, j = e.j;
    advance(i, e.t);
    advance(j, e.t);
    double nx = wrap_delta(px_[i] - px_[j]);
    double ny = wrap_delta(py_[i] - py_[j]);
    const double d = std::sqrt(nx * nx + ny * ny);
    if (d < 1e-14) {  // coincident centers cannot define a normal
      ++gen_[i];
      ++gen_[j];
      predict(i, e.t);
      predict(j, e.t);
      return;
    }
    nx /= d;
    ny /= d;
    const double ai = vx_[i] * nx + vy_[i] * ny;
    const double aj = vx_[j] * nx + vy_[j] * ny;
    // Swap normal components, then push apart at twice the growth speed so
    // the gap strictly reopens even when both discs were receding.
    const double bi = (aj - ai) + 2.0 * g_;
    const double bj = (ai - aj) - 2.0 * g_;
    vx_[i] += bi * nx;
    vy_[i] += bi * ny;
    vx_[j] += bj * nx;
    vy_[j] += bj * ny;
    ++gen_[i];
    ++gen_[j];
    predict(i, e.t);
    predict(j, e.t);
  }

  int64_t n_;
  double period_, rf_, g_, w_;
  int64_t m_;
  LsParams prm_;
  std::vector<double> px_, py_, vx_, vy_, tl_;
  std::vector<uint32_t> gen_;
  std::vector<int64_t> ci_, cj_;
  std::vector<std::vector<int32_t>> cells_;
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> heap_;
};

}  // namespace

PufMask generate_ls(double side_um, double radius_nm, double fp_target,
                    uint64_t seed, const LsParams& params) {
  const double r = radius_nm * 1e-3;
  if (side_um <= 4.0 * r) throw ConfigError("generate_ls: L must exceed 4r");
  if (fp_target < 0.0 || fp_target > 0.80)
    throw ConfigError("generate_ls: packing fraction outside [0, 0.80]");
  if (params.growth_rate <= 0.0) throw ConfigError("generate_ls: growth_rate <= 0");

  const int64_t n = std::llround(fp_target * side_um * side_um / (kPi * r * r));
  const int64_t lattice = lattice_size(side_um);
  const double period = static_cast<double>(lattice) * kPosQuantum;

  PufMask mask;
  mask.side_um = side_um;
  mask.radius_nm = radius_nm;
  mask.periodic = true;
  mask.seed = seed;
  mask.tag = GeneratorTag::kLs;
  mask.centers.resize(n, 2);
  if (n == 0) return mask;

  // Grow one quantum past the nominal radius so that lattice quantization of
  // the final centers cannot create sub-2r pairs.
  const double r_final = r + kPosQuantum;
  GrowthPacker packer(n, period, r_final, seed, params);
  packer.run(r_final / params.growth_rate);

  auto quantize_wrapped = [&](double v) {
    int64_t k = static_cast<int64_t>(std::nearbyint(v / kPosQuantum)) % lattice;
    if (k < 0) k += lattice;
    return static_cast<double>(k) * kPosQuantum;
  };
  for (int64_t k = 0; k < n; ++k) {
    mask.centers(k, 0) = quantize_wrapped(packer.x_of(k));
    mask.centers(k, 1) = quantize_wrapped(packer.y_of(k));
  }
  return mask;
}

}  // namespace pufsim::packing
