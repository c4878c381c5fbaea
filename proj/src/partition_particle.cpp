#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "noisewarp/partition.hpp"
#include "record_builder.hpp"

namespace noisewarp {

namespace {

struct AxisTaps {
  std::size_t lo;
  std::size_t hi;
  double f;  // weight of `hi`
};

AxisTaps axis_taps(double coord, std::size_t extent) {
  const double p = std::clamp(coord, 0.5, static_cast<double>(extent) - 0.5);
  const double s = p - 0.5;
  auto lo = static_cast<std::size_t>(std::floor(s));
  if (extent == 1) return {0, 0, 0.0};
  if (lo + 1 >= extent) lo = extent - 2;
  return {lo, lo + 1, s - static_cast<double>(lo)};
}

template <std::size_t Rank>
std::array<KernelTap, (1u << Rank)> kernel_taps(const std::array<double, Rank>& position,
                                                const Shape& shape) {
  std::array<AxisTaps, Rank> axes;
  for (std::size_t a = 0; a < Rank; ++a) axes[a] = axis_taps(position[a], shape[a]);
  std::array<KernelTap, (1u << Rank)> taps;
  for (std::size_t corner = 0; corner < taps.size(); ++corner) {
    std::size_t cell = 0;
    double w = 1.0;
    for (std::size_t a = 0; a < Rank; ++a) {
      const bool upper = (corner >> (Rank - 1 - a)) & 1u;
      cell = cell * shape[a] + (upper ? axes[a].hi : axes[a].lo);
      w *= upper ? axes[a].f : 1.0 - axes[a].f;
    }
    taps[corner] = {cell, w};
  }
  return taps;
}

template <std::size_t Rank>
PartitionRecord particle_partition(const FlowField& flow) {
  if (flow.rank() != Rank) throw std::invalid_argument("flow rank does not match kernel");
  if (!flow.all_finite()) throw std::invalid_argument("flow contains non-finite values");
  const Shape& shape = flow.shape();

  auto blocks = detail::collect_requests(
      shape.pixel_count(), [&](std::size_t dest, detail::RequestBlock& out) {
        std::array<std::size_t, Rank> coords;
        shape.unravel(dest, coords);
        std::array<double, Rank> position;
        for (std::size_t a = 0; a < Rank; ++a) {
          position[a] = static_cast<double>(coords[a]) + 0.5 + flow.component(dest, a);
          if (position[a] < 0.0 || position[a] > static_cast<double>(shape[a])) return;
        }
        for (const auto& tap : kernel_taps<Rank>(position, shape)) {
          if (tap.weight >= kMinKernelWeight) {
            out.push_back({static_cast<std::uint32_t>(tap.cell),
                           static_cast<std::uint32_t>(dest), tap.weight});
          }
        }
      });

  auto grouped = detail::group_by_source(shape.pixel_count(), blocks);
  blocks.clear();
  blocks.shrink_to_fit();

  const auto sources = static_cast<std::int64_t>(shape.pixel_count());
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < sources; ++s) {
    const std::size_t begin = grouped.offsets[s];
    const std::size_t end = grouped.offsets[s + 1];
    double total = 0.0;
    for (std::size_t k = begin; k < end; ++k) total += grouped.entries[k].area;
    for (std::size_t k = begin; k < end; ++k) grouped.entries[k].area /= total;
  }
  return PartitionRecord(shape, std::move(grouped.offsets), std::move(grouped.entries));
}

}  // namespace

std::array<KernelTap, 4> bilinear_weights(Point2 position, const Shape& shape) {
  if (shape.rank() != 2) throw std::invalid_argument("bilinear weights need a 2D grid");
  return kernel_taps<2>({position.x, position.y}, shape);
}

std::array<KernelTap, 8> trilinear_weights(const std::array<double, 3>& position,
                                           const Shape& shape) {
  if (shape.rank() != 3) throw std::invalid_argument("trilinear weights need a 3D grid");
  return kernel_taps<3>(position, shape);
}

PartitionRecord build_particle_partition(const FlowField& flow) {
  return particle_partition<2>(flow);
}

PartitionRecord build_particle_partition_3d(const FlowField& flow) {
  return particle_partition<3>(flow);
}

}  // namespace noisewarp
