#pragma once

// Straightforward single-threaded versions of the parallel kernels. They
// follow the textbook loop structure (append per source, accumulate in
// place) and are kept as test oracles and benchmark baselines.
//
// Partition builders and warp_noise match their parallel counterparts bit
// for bit. hiwyn_warp sums subpixels in plain scan order, so it matches the
// parallel gather to rounding only.

#include <cstdint>

#include "noisewarp/core.hpp"
#include "noisewarp/warp.hpp"

namespace noisewarp::reference {

NoiseTensor make_prior_noise(const Shape& shape, std::size_t channels, std::uint64_t seed);

PartitionRecord build_grid_partition(const FlowField& flow);
PartitionRecord build_particle_partition(const FlowField& flow);  // 2D or 3D

WarpOutput warp_noise(const NoiseTensor& prior, const PartitionRecord& record, std::uint64_t seed);

WarpOutput hiwyn_warp(const NoiseTensor& prior, const FlowField& flow, std::size_t n,
                      std::uint64_t seed);

}  // namespace noisewarp::reference
