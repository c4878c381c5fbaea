#pragma once

// Infinite-resolution integral noise warp: every source pixel walks a
// Brownian bridge ending at its prior value, with bridge time advanced by the
// areas in its partition record; the bridge increments are scattered to the
// destinations and each destination is rescaled to unit variance.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "noisewarp/core.hpp"
#include "noisewarp/partition.hpp"

namespace noisewarp {

// A request that overshoots t = 1 by more than this counts as a clamp event.
inline constexpr double kClampTolerance = 1e-9;

struct WarpOutput {
  NoiseTensor warped;
  // Bridge time actually received per destination pixel (after clamping).
  std::vector<double> area;
  // Destinations that received nothing; refilled with fresh N(0,1) draws.
  std::vector<std::uint32_t> vacated;
  // Record entries whose requested area was cut short by the t <= 1 clamp.
  std::size_t clamp_events = 0;
};

// Throws std::invalid_argument when the record shape differs from the prior's.
WarpOutput warp_noise(const NoiseTensor& prior, const PartitionRecord& record,
                      std::uint64_t seed);

// frames[0] = prior, frames[k+1] = warp(frames[k], build(flows[k])).
std::vector<NoiseTensor> warp_sequence(const NoiseTensor& prior, std::span<const FlowField> flows,
                                       PartitionMethod method, std::uint64_t seed);

// Replaces destinations with zero area by fresh N(0,1) draws and divides the
// rest by sqrt(area). Shared with the upsampling reference.
void normalize_and_refill(NoiseTensor& accum, std::span<const double> area, std::uint64_t seed,
                          std::vector<std::uint32_t>& vacated);

}  // namespace noisewarp
