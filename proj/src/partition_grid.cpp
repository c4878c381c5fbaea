#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "noisewarp/partition.hpp"
#include "clip.hpp"
#include "record_builder.hpp"

namespace noisewarp {

namespace {

void require_grid_flow(const FlowField& flow) {
  if (flow.rank() != 2) throw std::invalid_argument("grid partition needs a 2D flow");
  if (!flow.all_finite()) throw std::invalid_argument("flow contains non-finite values");
}

}  // namespace

PartitionRecord build_grid_partition(const FlowField& flow) {
  require_grid_flow(flow);
  const Shape& shape = flow.shape();
  const std::size_t rows = shape[0];
  const std::size_t cols = shape[1];

  auto blocks = detail::collect_requests(
      shape.pixel_count(), [&](std::size_t dest, detail::RequestBlock& out) {
        const auto octagon = octagon_vertices(flow, dest / cols, dest % cols);
        const BoundingBox box = bounding_box(octagon);
        if (box.x1 <= 0.0 || box.y1 <= 0.0 || box.x0 >= static_cast<double>(rows) ||
            box.y0 >= static_cast<double>(cols)) {
          return;
        }
        const auto u_lo = static_cast<std::size_t>(std::max(0.0, std::floor(box.x0)));
        const auto v_lo = static_cast<std::size_t>(std::max(0.0, std::floor(box.y0)));
        const auto u_hi = static_cast<std::size_t>(
            std::min(static_cast<double>(rows), std::ceil(box.x1)));
        const auto v_hi = static_cast<std::size_t>(
            std::min(static_cast<double>(cols), std::ceil(box.y1)));
        detail::SmallPolygon poly, tmp, slab, cell;
        poly.n = octagon.size();
        std::copy(octagon.begin(), octagon.end(), poly.v.begin());
        // Same pass order as clip_polygon_to_box (x low, x high, y low, y
        // high). The x passes are shared across a row of cells, and a pass
        // with every vertex already inside is skipped: it would copy its input.
        for (std::size_t u = u_lo; u < u_hi; ++u) {
          const auto x0 = static_cast<double>(u);
          const auto* src = &poly;
          if (box.x0 < x0) {
            detail::clip_pass<0>(*src, x0, -1.0, tmp);
            src = &tmp;
          }
          if (box.x1 > x0 + 1.0) {
            detail::clip_pass<0>(*src, x0 + 1.0, 1.0, slab);
          } else {
            slab = *src;
          }
          if (slab.n < 3) continue;
          const BoundingBox sb = bounding_box(slab.span());
          const auto s_lo = std::max(v_lo, static_cast<std::size_t>(std::max(0.0, std::floor(sb.y0))));
          const auto s_hi = std::min(v_hi, static_cast<std::size_t>(std::max(0.0, std::ceil(sb.y1))));
          for (std::size_t v = s_lo; v < s_hi; ++v) {
            const auto y0 = static_cast<double>(v);
            const auto* in = &slab;
            if (sb.y0 < y0) {
              detail::clip_pass<1>(*in, y0, -1.0, tmp);
              in = &tmp;
            }
            if (sb.y1 > y0 + 1.0) {
              detail::clip_pass<1>(*in, y0 + 1.0, 1.0, cell);
              in = &cell;
            }
            const double area = polygon_area(in->span());
            if (area >= kMinPartitionArea) {
              out.push_back({static_cast<std::uint32_t>(shape.index(u, v)),
                             static_cast<std::uint32_t>(dest), area});
            }
          }
        }
      });

  auto grouped = detail::group_by_source(shape.pixel_count(), blocks);
  return PartitionRecord(shape, std::move(grouped.offsets), std::move(grouped.entries));
}

PartitionRecord build_partition(const FlowField& flow, PartitionMethod method) {
  switch (method) {
    case PartitionMethod::grid:
      return build_grid_partition(flow);
    case PartitionMethod::particle:
      return flow.rank() == 3 ? build_particle_partition_3d(flow) : build_particle_partition(flow);
  }
  throw std::invalid_argument("unknown partition method");
}

}  // namespace noisewarp
