#pragma once

// Brownian bridge on [0,1] pinned at B(0)=0 and B(1)=c, sampled
// autoregressively, and the finite-N upsampled-subpixel law whose prefix sums
// converge to it.

#include <cstddef>
#include <span>
#include <vector>

#include "noisewarp/core.hpp"

namespace noisewarp {

// Steps that leave less than this much time before 1 are treated as terminal.
inline constexpr double kBridgeTerminalFloor = 1e-12;
// Tolerated overshoot of t + dt past 1 before a step is rejected.
inline constexpr double kBridgeTimeSlack = 1e-9;

struct BridgeState {
  double c = 0.0;  // endpoint: value at t = 1
  double t = 0.0;
  double q = 0.0;  // current value B(t)
};

// One conditional step B(t+dt) | B(t)=q. Reaching t=1 pins q to c exactly.
// Throws std::invalid_argument for dt < 0 or t + dt > 1 + kBridgeTimeSlack.
BridgeState bridge_step(const BridgeState& state, double dt, const RngKey& key);

// Values B(times[k]); step k uses draw key.draw + k. `times` must be sorted
// and inside [0,1].
std::vector<double> bridge_prefix_path(double c, std::span<const double> times, RngKey key);

// N*N subpixels X_k = c/N^2 + (Z_k - S/N^2)/N with S = sum Z. Uses draws
// key.draw .. key.draw + N^2 - 1. Throws for N == 0.
std::vector<double> sample_upsampled_subimage(double c, std::size_t n, RngKey key);
void sample_upsampled_subimage(double c, std::size_t n, RngKey key, std::span<double> out);

}  // namespace noisewarp
