#pragma once

// Partition records: for every source pixel square, which deformed
// destination regions take how much of its area.
//
// Grid variant: each destination square is mapped to an octagon and clipped
// against the source cells it touches.
// Particle variant: each destination is a particle at psi(centre) that
// requests area from nearby cells through a (bi|tri)linear kernel; every
// cell then rescales what it received to exactly one pixel.

#include <array>
#include <cstddef>
#include <utility>

#include "noisewarp/core.hpp"
#include "noisewarp/geometry.hpp"

namespace noisewarp {

// Clipped areas below this are not recorded.
inline constexpr double kMinPartitionArea = 1e-12;
// Kernel weights below this are not recorded.
inline constexpr double kMinKernelWeight = 1e-12;

enum class PartitionMethod { grid, particle };

// Throws std::invalid_argument for non-2D or non-finite flow.
PartitionRecord build_grid_partition(const FlowField& flow);

struct KernelTap {
  std::size_t cell;
  double weight;
};

// Position is clamped to [0.5, D-0.5] per axis before weighting. Weights are
// non-negative and sum to 1; taps with zero weight may repeat a cell.
std::array<KernelTap, 4> bilinear_weights(Point2 position, const Shape& shape);
std::array<KernelTap, 8> trilinear_weights(const std::array<double, 3>& position,
                                           const Shape& shape);

// 2D. Particles that land outside [0,D] on some axis are dropped; those in
// the half-pixel border band are clamped onto the outermost centres.
PartitionRecord build_particle_partition(const FlowField& flow);
PartitionRecord build_particle_partition_3d(const FlowField& flow);

PartitionRecord build_partition(const FlowField& flow, PartitionMethod method);

}  // namespace noisewarp
