#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "pufsim/optics.hpp"

namespace pufsim {

struct GaborConfig {
  double wavelength_px = 3.0;  // carrier period, detector pixels
  double theta_rad = 0.0;      // carrier orientation
  double sigma_px = 3.0;       // Gaussian envelope width
  int stride_px = 5;           // bit sampling stride; key length = (W/stride)^2
  uint64_t hash() const;
};

// Fixed-length bit string hashed from one response. Bits are packed MSB-first
// into 64-bit words: bit k of the key is word k/64, bit 63-(k%64).
struct BinaryKey {
  std::vector<uint64_t> words;
  int64_t nbits = 0;
  ResponseMeta meta;

  bool bit(int64_t k) const {
    return (words[static_cast<size_t>(k >> 6)] >> (63 - (k & 63))) & 1u;
  }
};

// Zero-mean the image, convolve with the complex Gabor kernel (wrapped
// boundaries), sample the real part on the stride lattice, bit = value > 0.
BinaryKey hash_response(const SpeckleResponse& r, const GaborConfig& g);

struct RegistrationResult {
  int dx = 0;
  int dy = 0;
  double score = 0.0;
  bool ok = false;           // false: peak below threshold, moving left unmodified
  SpeckleResponse aligned;
};

// Phase-correlation (normalized cross-power spectrum) integer-pixel
// registration of `moving` against `reference`.
RegistrationResult register_response(const SpeckleResponse& reference,
                                     const SpeckleResponse& moving,
                                     double rho_min = 0.1);

// Sets the carrier period to the mean speckle grain size (FWHM of the
// radially averaged intensity autocorrelation); sigma = wavelength.
GaborConfig tune_gabor(std::span<const SpeckleResponse> responses);

}  // namespace pufsim
