#pragma once

#include <stdexcept>
#include <string>

namespace pufsim {

struct SaturationUnreachable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GrowthStalled : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonPeriodicShift : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedPerturbation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OddM : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooManyFlips : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PitchMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DivisibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct WindowOutOfBounds : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LengthMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientKeys : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientSample : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateSample : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DatabaseExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pufsim
