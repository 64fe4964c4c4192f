#include "pufsim/optics.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

namespace pufsim {

namespace {

uint64_t hash_double(uint64_t h, double v) {
  uint64_t u;
  std::memcpy(&u, &v, sizeof(u));
  return SplitRng::mix(h ^ (u + 0x9e3779b97f4a7c15ull));
}

}  // namespace

uint64_t OpticsConfig::hash() const {
  uint64_t h = 0xa0761d6478bd642full;
  h = hash_double(h, wavelength_nm);
  h = hash_double(h, z_mm);
  h = hash_double(h, pitch_nm);
  h = SplitRng::mix(h ^ static_cast<uint64_t>(grid));
  h = hash_double(h, amplitude);
  h = SplitRng::mix(h ^ static_cast<uint64_t>(window));
  h = SplitRng::mix(h ^ static_cast<uint64_t>(static_cast<int64_t>(offset_x) + (static_cast<int64_t>(offset_y) << 20)));
  h = SplitRng::mix(h ^ static_cast<uint64_t>(binning));
  h = hash_double(h, noise_rel);
  h = SplitRng::mix(h ^ noise_seed);
  return h;
}

BitGrid rasterize(const PufMask& mask, const OpticsConfig& cfg) {
  const int ng = cfg.grid;
  const double pitch = cfg.pitch_um();
  const double extent = pitch * ng;
  if (std::abs(extent - mask.side_um) > 1e-9 * mask.side_um)
    throw PitchMismatch("rasterize: pitch * n_g must equal the mask extent L");
  const double r = mask.radius_um();
  if (cfg.pitch_um() > 0.5 * r + 1e-12)
    throw ConfigError("rasterize: pitch must be <= r/2");

  BitGrid t = BitGrid::Zero(ng, ng);
  const double r2 = r * r;
  const int reach = static_cast<int>(std::ceil(r / pitch)) + 1;
  for (int64_t k = 0; k < mask.count(); ++k) {
    const double x = mask.centers(k, 0);
    const double y = mask.centers(k, 1);
    const int i0 = static_cast<int>(std::floor(x / pitch));
    const int j0 = static_cast<int>(std::floor(y / pitch));
    for (int i = i0 - reach; i <= i0 + reach; ++i) {
      const double dx = (i + 0.5) * pitch - x;
      if (!mask.periodic && (i < 0 || i >= ng)) continue;
      for (int j = j0 - reach; j <= j0 + reach; ++j) {
        if (!mask.periodic && (j < 0 || j >= ng)) continue;
        const double dy = (j + 0.5) * pitch - y;
        if (dx * dx + dy * dy <= r2)
          t(((i % ng) + ng) % ng, ((j % ng) + ng) % ng) = 1;
      }
    }
  }
  return t;
}

template <class Scalar>
ComplexGrid<Scalar> make_transfer(const OpticsConfig& cfg) {
  const int ng = cfg.grid;
  const double lam = cfg.wavelength_um();
  const double z = cfg.z_um();
  const double extent = cfg.extent_um();
  const double inv_lam2 = 1.0 / (lam * lam);
  const double f_limit = 1.0 / (lam * std::sqrt(1.0 + std::pow(2.0 * z / extent, 2)));

  Eigen::ArrayXd freq(ng);
  for (int i = 0; i < ng; ++i) {
    const int k = i <= ng / 2 ? i : i - ng;
    freq(i) = static_cast<double>(k) / extent;
  }

  ComplexGrid<Scalar> H(ng, ng);
  for (int j = 0; j < ng; ++j) {
    const double fy = freq(j);
    for (int i = 0; i < ng; ++i) {
      const double fx = freq(i);
      const double f2 = fx * fx + fy * fy;
      if (f2 > inv_lam2 || std::abs(fx) > f_limit || std::abs(fy) > f_limit) {
        H(i, j) = std::complex<Scalar>(0, 0);
      } else {
        const double phase = 2.0 * std::numbers::pi * z * std::sqrt(inv_lam2 - f2);
        H(i, j) = std::complex<Scalar>(static_cast<Scalar>(std::cos(phase)),
                                       static_cast<Scalar>(std::sin(phase)));
      }
    }
  }
  return H;
}

template <class Scalar>
ComplexField<Scalar> illuminate(const Challenge& c, const BitGrid& transmission,
                                const OpticsConfig& cfg) {
  const int ng = cfg.grid;
  if (transmission.rows() != ng || transmission.cols() != ng)
    throw DimensionMismatch("illuminate: transmission grid does not match n_g");
  if (c.m <= 0 || ng % c.m != 0)
    throw DivisibilityError("illuminate: n_g must be divisible by M");
  const int block = ng / c.m;
  ComplexField<Scalar> f;
  f.pitch_nm = cfg.pitch_nm;
  f.values = ComplexGrid<Scalar>::Zero(ng, ng);
  const Scalar amp = static_cast<Scalar>(cfg.amplitude);
  for (int j = 0; j < ng; ++j) {
    const int cj = j / block;
    for (int i = 0; i < ng; ++i) {
      if (transmission(i, j) && c.bits(i / block, cj))
        f.values(i, j) = std::complex<Scalar>(amp, 0);
    }
  }
  return f;
}

template <class Scalar>
void propagate_inplace(ComplexField<Scalar>& f, const ComplexGrid<Scalar>& transfer,
                       Fft2<Scalar>& fft) {
  fft.fwd(f.values);
  f.values *= transfer;
  fft.inv(f.values);
}

template <class Scalar>
ComplexField<Scalar> propagate(const ComplexField<Scalar>& f, const OpticsConfig& cfg) {
  if (cfg.z_mm < 0) throw ConfigError("propagate: z must be >= 0");
  if (cfg.z_mm == 0.0) return f;
  ComplexField<Scalar> out = f;
  Fft2<Scalar> fft;
  const ComplexGrid<Scalar> H = make_transfer<Scalar>(cfg);
  propagate_inplace(out, H, fft);
  return out;
}

namespace {

template <class Scalar>
SpeckleResponse record_impl(const ComplexField<Scalar>& f, const OpticsConfig& cfg) {
  const int ng = static_cast<int>(f.values.rows());
  const int W = cfg.window;
  const int B = cfg.binning;
  const int span = W * B;
  if (span + std::max(std::abs(cfg.offset_x), std::abs(cfg.offset_y)) > ng / 2)
    throw WindowOutOfBounds("record: detector window exceeds the grid");
  const int x0 = ng / 2 + cfg.offset_x;
  const int y0 = ng / 2 + cfg.offset_y;
  if (x0 < 0 || y0 < 0 || x0 + span > ng || y0 + span > ng)
    throw WindowOutOfBounds("record: detector window exceeds the grid");

  SpeckleResponse r;
  r.intensity = Eigen::ArrayXXd::Zero(W, W);
  for (int j = 0; j < span; ++j) {
    const int bj = j / B;
    for (int i = 0; i < span; ++i) {
      const std::complex<Scalar> v = f.values(x0 + i, y0 + j);
      r.intensity(i / B, bj) += static_cast<double>(std::norm(v));
    }
  }
  if (cfg.noise_rel > 0.0) {
    SplitRng rng(cfg.noise_seed, 0x6e6f6973);
    const double scale = cfg.noise_rel * r.intensity.mean();
    for (int j = 0; j < W; ++j)
      for (int i = 0; i < W; ++i)
        r.intensity(i, j) = std::max(0.0, r.intensity(i, j) + scale * rng.next_normal());
  }
  r.meta.optics_hash = cfg.hash();
  return r;
}

}  // namespace

SpeckleResponse record(const ComplexField<double>& f, const OpticsConfig& cfg) {
  return record_impl(f, cfg);
}
SpeckleResponse record(const ComplexField<float>& f, const OpticsConfig& cfg) {
  return record_impl(f, cfg);
}

template <class Scalar>
SimContext<Scalar>::SimContext(const PufMask& mask, const OpticsConfig& cfg)
    : cfg_(cfg), transmission_(rasterize(mask, cfg)), mask_id_(mask_id(mask)) {
  if (cfg.z_mm > 0.0) transfer_ = make_transfer<Scalar>(cfg);
}

template <class Scalar>
SpeckleResponse SimContext<Scalar>::respond(const Challenge& c) {
  ComplexField<Scalar> f = illuminate<Scalar>(c, transmission_, cfg_);
  if (cfg_.z_mm > 0.0) propagate_inplace(f, transfer_, fft_);
  SpeckleResponse r = record(f, cfg_);
  r.meta.mask_id = mask_id_;
  r.meta.challenge_seed = c.seed;
  return r;
}

SpeckleResponse simulate_response(const PufMask& mask, const Challenge& c,
                                  const OpticsConfig& cfg) {
  SimContext<double> ctx(mask, cfg);
  return ctx.respond(c);
}

template ComplexGrid<double> make_transfer<double>(const OpticsConfig&);
template ComplexGrid<float> make_transfer<float>(const OpticsConfig&);
template ComplexField<double> illuminate<double>(const Challenge&, const BitGrid&,
                                                 const OpticsConfig&);
template ComplexField<float> illuminate<float>(const Challenge&, const BitGrid&,
                                               const OpticsConfig&);
template ComplexField<double> propagate<double>(const ComplexField<double>&,
                                                const OpticsConfig&);
template ComplexField<float> propagate<float>(const ComplexField<float>&,
                                              const OpticsConfig&);
template void propagate_inplace<double>(ComplexField<double>&, const ComplexGrid<double>&,
                                        Fft2<double>&);
template void propagate_inplace<float>(ComplexField<float>&, const ComplexGrid<float>&,
                                       Fft2<float>&);
template class SimContext<double>;
template class SimContext<float>;

}  // namespace pufsim
