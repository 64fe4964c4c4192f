#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "pufsim/challenge.hpp"
#include "pufsim/errors.hpp"
#include "pufsim/fft.hpp"
#include "pufsim/mask.hpp"
#include "pufsim/rng.hpp"

namespace pufsim {

struct OpticsConfig {
  double wavelength_nm = 633.0;
  double z_mm = 5.0;
  double pitch_nm = 50.0;
  int grid = 2048;            // n_g, cells per side
  double amplitude = 1.0;     // plane-wave illumination amplitude U
  int window = 250;           // W, detector pixels per side
  int offset_x = 500;         // window anchor offset from grid center, grid cells
  int offset_y = 500;
  int binning = 2;            // B, grid cells per detector pixel
  double noise_rel = 0.0;     // optional additive detector noise, relative to mean
  uint64_t noise_seed = 0;

  double wavelength_um() const { return wavelength_nm * 1e-3; }
  double z_um() const { return z_mm * 1e3; }
  double pitch_um() const { return pitch_nm * 1e-3; }
  double extent_um() const { return pitch_um() * grid; }
  uint64_t hash() const;
};

template <class Scalar>
struct ComplexField {
  ComplexGrid<Scalar> values;
  double pitch_nm = 0.0;
};

struct ResponseMeta {
  uint64_t mask_id = 0;
  uint64_t challenge_seed = 0;
  uint64_t optics_hash = 0;
  uint64_t hash() const {
    return SplitRng::mix(mask_id ^ SplitRng::mix(challenge_seed ^ SplitRng::mix(optics_hash)));
  }
};

struct SpeckleResponse {
  Eigen::ArrayXXd intensity;  // W x W, non-negative
  ResponseMeta meta;
};

// --- pipeline stages ------------------------------------------------------

// Binary transmission grid: cell = 1 iff its center lies inside any disc
// (union semantics; wraparound when the mask is periodic).
BitGrid rasterize(const PufMask& mask, const OpticsConfig& cfg);

// Band-limited angular-spectrum transfer function H(fx, fy). Evanescent
// frequencies and frequencies beyond the anti-aliasing limit
// 1 / (lambda * sqrt(1 + (2 z / (n_g pitch))^2)) are zeroed per axis.
template <class Scalar>
ComplexGrid<Scalar> make_transfer(const OpticsConfig& cfg);

template <class Scalar>
ComplexField<Scalar> illuminate(const Challenge& c, const BitGrid& transmission,
                                const OpticsConfig& cfg);

template <class Scalar>
ComplexField<Scalar> propagate(const ComplexField<Scalar>& f, const OpticsConfig& cfg);

// In-place fast path with caller-owned workspace and transfer grid.
template <class Scalar>
void propagate_inplace(ComplexField<Scalar>& f, const ComplexGrid<Scalar>& transfer,
                       Fft2<Scalar>& fft);

SpeckleResponse record(const ComplexField<double>& f, const OpticsConfig& cfg);
SpeckleResponse record(const ComplexField<float>& f, const OpticsConfig& cfg);

// Reusable context: rasterization and transfer function are computed once
// per (mask, config); respond() runs one challenge through the pipeline.
// Not thread-safe across concurrent respond() calls; use one per worker.
template <class Scalar = double>
class SimContext {
 public:
  SimContext(const PufMask& mask, const OpticsConfig& cfg);

  SpeckleResponse respond(const Challenge& c);

  const BitGrid& transmission() const { return transmission_; }
  const OpticsConfig& config() const { return cfg_; }
  uint64_t mask_hash() const { return mask_id_; }

 private:
  OpticsConfig cfg_;
  BitGrid transmission_;
  ComplexGrid<Scalar> transfer_;
  Fft2<Scalar> fft_;
  uint64_t mask_id_ = 0;
};

// One-shot composition of the four stages; pure and deterministic.
SpeckleResponse simulate_response(const PufMask& mask, const Challenge& c,
                                  const OpticsConfig& cfg);

}  // namespace pufsim
