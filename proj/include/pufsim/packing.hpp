#pragma once

#include <cstdint>
#include <string>

#include "pufsim/mask.hpp"

namespace pufsim::packing {

enum class PerturbKind { kJitter, kRemove, kRemoveAdd, kShift, kRadius };

std::string to_string(PerturbKind kind);
PerturbKind perturb_kind_from_string(const std::string& s);

// magnitude units depend on kind: nanometers for jitter and radius,
// fraction of the disc count for remove/remove_add, fraction of L for shift.
struct PerturbationSpec {
  PerturbKind kind = PerturbKind::kJitter;
  double magnitude = 0.0;
  uint64_t seed = 0;
};

struct LsParams {
  double growth_rate = 0.02;   // um per unit time, radius growth speed
  double speed = 0.5;          // initial per-axis velocity bound, um per unit time
  int64_t stall_events = 100000;
  double stall_dfrac = 1e-6;   // min packing-fraction advance per stall window
};

// Random sequential adsorption. Saturates near f_p ~ 0.547 for equal discs;
// targets above that exhaust the failure cap.
PufMask generate_rsa(double side_um, double radius_nm, double fp_target,
                     uint64_t seed, bool periodic = true,
                     int64_t failure_cap = 1000000);

// Event-driven growth packing (periodic domain). Discs grow from zero radius
// under elastic dynamics until the common radius reaches radius_nm.
PufMask generate_ls(double side_um, double radius_nm, double fp_target,
                    uint64_t seed, const LsParams& params = {});

PufMask perturb(const PufMask& mask, const PerturbationSpec& spec);

// Fresh packing at a different hole radius, same target fraction.
// Uses LS above f_p = 0.5 and RSA otherwise.
PufMask regenerate_radius(double side_um, double fp_target, double radius_new_nm,
                          uint64_t seed, bool periodic = true);

double packing_fraction(const PufMask& mask);

// Smallest pairwise center distance (wraparound metric when periodic).
// Returns +inf for fewer than two discs. Cell-list accelerated.
double min_pair_distance(const PufMask& mask);

}  // namespace pufsim::packing
