#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>

namespace pufsim {

enum class GeneratorTag { kRsa, kLs, kDerived };

std::string to_string(GeneratorTag tag);
GeneratorTag generator_tag_from_string(const std::string& s);

// Center coordinates live on a fixed lattice of kPosQuantum micrometers
// (about 7.6 femtometers, far below any physical scale in play). On the
// lattice, periodic shifts and file round-trips are exact in double
// arithmetic; without it neither "shift by d then by 1-d is the identity"
// nor "9 significant digits round-trip bit-exactly" can hold.
inline constexpr double kPosQuantum = 0x1.0p-17;  // um

inline double quantize_um(double v) { return std::nearbyint(v / kPosQuantum) * kPosQuantum; }

// Wrap lattice size for a domain of side L; kept even so that
// round(f*K) + round((1-f)*K) == K under round-half-even.
inline int64_t lattice_size(double side_um) {
  return 2 * static_cast<int64_t>(std::floor(side_um / kPosQuantum / 2.0));
}

struct PufMask {
  double side_um = 0.0;      // L
  double radius_nm = 0.0;    // hole radius r
  Eigen::ArrayX2d centers;   // (x, y) in [0, L), micrometers, lattice-quantized
  bool periodic = true;
  uint64_t seed = 0;
  GeneratorTag tag = GeneratorTag::kDerived;

  int64_t count() const { return centers.rows(); }
  double radius_um() const { return radius_nm * 1e-3; }
  // Effective wrap period (= lattice_size * quantum, <= side_um by < 1 quantum).
  double period_um() const { return static_cast<double>(lattice_size(side_um)) * kPosQuantum; }
};

// Content hash used to tie responses and keys back to the mask they came from.
uint64_t mask_id(const PufMask& mask);

}  // namespace pufsim
