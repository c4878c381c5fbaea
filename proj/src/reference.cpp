#include "noisewarp/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "noisewarp/bridge.hpp"
#include "noisewarp/geometry.hpp"
#include "noisewarp/hiwyn.hpp"
#include "noisewarp/partition.hpp"

namespace noisewarp::reference {

namespace {

PartitionRecord flatten(const Shape& shape, const std::vector<std::vector<PartitionEntry>>& lists) {
  std::vector<std::size_t> offsets{0};
  std::vector<PartitionEntry> entries;
  for (const auto& list : lists) {
    entries.insert(entries.end(), list.begin(), list.end());
    offsets.push_back(entries.size());
  }
  return PartitionRecord(shape, std::move(offsets), std::move(entries));
}

}  // namespace

NoiseTensor make_prior_noise(const Shape& shape, std::size_t channels, std::uint64_t seed) {
  NoiseTensor out(shape, channels);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t p = 0; p < out.pixel_count(); ++p) {
      out.at(c, p) = standard_normal({seed, p, static_cast<std::uint32_t>(c), 0, Stream::prior});
    }
  }
  return out;
}

PartitionRecord build_grid_partition(const FlowField& flow) {
  if (flow.rank() != 2) throw std::invalid_argument("grid partition needs a 2D flow");
  if (!flow.all_finite()) throw std::invalid_argument("flow contains non-finite values");
  const Shape& shape = flow.shape();
  std::vector<std::vector<PartitionEntry>> lists(shape.pixel_count());
  for (std::size_t i = 0; i < shape[0]; ++i) {
    for (std::size_t j = 0; j < shape[1]; ++j) {
      const Polygon octagon = warp_square_to_octagon(flow, i, j);
      const BoundingBox box = bounding_box(octagon.vertices);
      for (std::size_t u = 0; u < shape[0]; ++u) {
        if (static_cast<double>(u + 1) <= box.x0 || static_cast<double>(u) >= box.x1) continue;
        for (std::size_t v = 0; v < shape[1]; ++v) {
          if (static_cast<double>(v + 1) <= box.y0 || static_cast<double>(v) >= box.y1) continue;
          const double area = polygon_area(clip_polygon_to_cell(octagon, u, v));
          if (area >= kMinPartitionArea) {
            lists[shape.index(u, v)].push_back({area, static_cast<std::uint32_t>(shape.index(i, j))});
          }
        }
      }
    }
  }
  return flatten(shape, lists);
}

PartitionRecord build_particle_partition(const FlowField& flow) {
  if (!flow.all_finite()) throw std::invalid_argument("flow contains non-finite values");
  const Shape& shape = flow.shape();
  const std::size_t rank = shape.rank();
  std::vector<std::vector<PartitionEntry>> lists(shape.pixel_count());
  std::vector<std::size_t> coords(rank);
  for (std::size_t dest = 0; dest < shape.pixel_count(); ++dest) {
    shape.unravel(dest, coords);
    std::array<double, 3> pos{};
    bool inside = true;
    for (std::size_t a = 0; a < rank; ++a) {
      pos[a] = static_cast<double>(coords[a]) + 0.5 + flow.component(dest, a);
      inside = inside && pos[a] >= 0.0 && pos[a] <= static_cast<double>(shape[a]);
    }
    if (!inside) continue;
    auto add = [&](const KernelTap& tap) {
      if (tap.weight >= kMinKernelWeight) {
        lists[tap.cell].push_back({tap.weight, static_cast<std::uint32_t>(dest)});
      }
    };
    if (rank == 2) {
      for (const auto& tap : bilinear_weights({pos[0], pos[1]}, shape)) add(tap);
    } else {
      for (const auto& tap : trilinear_weights(pos, shape)) add(tap);
    }
  }
  for (auto& list : lists) {
    double total = 0.0;
    for (const auto& e : list) total += e.area;
    for (auto& e : list) e.area /= total;
  }
  return flatten(shape, lists);
}

WarpOutput warp_noise(const NoiseTensor& prior, const PartitionRecord& record, std::uint64_t seed) {
  if (!(prior.shape() == record.shape())) {
    throw std::invalid_argument("partition record shape does not match the prior");
  }
  const std::size_t pixels = prior.pixel_count();
  WarpOutput out{NoiseTensor(prior.shape(), prior.channels()), std::vector<double>(pixels, 0.0), {}, 0};
  for (std::size_t ch = 0; ch < prior.channels(); ++ch) {
    for (std::size_t s = 0; s < record.source_count(); ++s) {
      BridgeState state{prior.at(ch, s), 0.0, 0.0};
      double t = 0.0;
      std::uint32_t draw = 0;
      for (const auto& entry : record.entries(s)) {
        const double requested = t + entry.area;
        const double t_next = std::min(requested, 1.0);
        const double dt = t_next - t;
        const BridgeState next =
            bridge_step(state, dt, {seed, s, static_cast<std::uint32_t>(ch), draw++, Stream::bridge});
        out.warped.at(ch, entry.dest) += next.q - state.q;
        if (ch == 0) {
          out.area[entry.dest] += dt;
          if (requested > 1.0 + kClampTolerance) ++out.clamp_events;
        }
        state = next;
        t = t_next;
      }
    }
  }
  normalize_and_refill(out.warped, out.area, seed, out.vacated);
  return out;
}

WarpOutput hiwyn_warp(const NoiseTensor& prior, const FlowField& flow, std::size_t n,
                      std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("upsampling level must be >= 1");
  if (!(prior.shape() == flow.shape()) || flow.rank() != 2) {
    throw std::invalid_argument("flow shape does not match the prior");
  }
  const Shape& shape = prior.shape();
  const std::size_t rows = shape[0], cols = shape[1];
  const std::size_t fine_rows = rows * n, fine_cols = cols * n;
  const std::size_t pixels = shape.pixel_count();

  // Claim subpixels destination by destination; the first claim wins.
  std::vector<std::uint32_t> owner(fine_rows * fine_cols, kUnowned);
  std::vector<Polygon> octagons;
  for (std::size_t d = 0; d < pixels; ++d) {
    octagons.push_back(warp_square_to_octagon(flow, d / cols, d % cols));
    // Fine-grid index range whose centres can lie inside the bounding box.
    const BoundingBox box = bounding_box(octagons.back().vertices);
    const double nd = static_cast<double>(n);
    auto first = [&](double lo, std::size_t extent) {
      return static_cast<std::size_t>(std::clamp(std::floor(lo * nd - 0.5), 0.0, static_cast<double>(extent)));
    };
    auto last = [&](double hi, std::size_t extent) {
      return static_cast<std::size_t>(std::clamp(std::ceil(hi * nd - 0.5) + 1.0, 0.0, static_cast<double>(extent)));
    };
    for (std::size_t fx = first(box.x0, fine_rows); fx < last(box.x1, fine_rows); ++fx) {
      for (std::size_t fy = first(box.y0, fine_cols); fy < last(box.y1, fine_cols); ++fy) {
        const Point2 centre{(static_cast<double>(fx) + 0.5) / static_cast<double>(n),
                            (static_cast<double>(fy) + 0.5) / static_cast<double>(n)};
        auto& slot = owner[fx * fine_cols + fy];
        if (slot == kUnowned && point_in_polygon(octagons.back().vertices, centre)) {
          slot = static_cast<std::uint32_t>(d);
        }
      }
    }
  }

  WarpOutput out{NoiseTensor(shape, prior.channels()), std::vector<double>(pixels, 0.0), {}, 0};
  std::vector<double> counts(pixels, 0.0);
  for (const auto o : owner) {
    if (o != kUnowned) counts[o] += 1.0;
  }
  for (std::size_t d = 0; d < pixels; ++d) out.area[d] = counts[d] / static_cast<double>(n * n);

  std::vector<double> fine(fine_rows * fine_cols);
  for (std::size_t ch = 0; ch < prior.channels(); ++ch) {
    for (std::size_t s = 0; s < pixels; ++s) {
      const auto sub = sample_upsampled_subimage(
          prior.at(ch, s), n, {seed, s, static_cast<std::uint32_t>(ch), 0, Stream::upsample});
      const std::size_t si = s / cols, sj = s % cols;
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) fine[(si * n + a) * fine_cols + sj * n + b] = sub[a * n + b];
      }
    }
    for (std::size_t f = 0; f < fine.size(); ++f) {
      if (owner[f] != kUnowned) out.warped.at(ch, owner[f]) += fine[f];
    }
  }
  normalize_and_refill(out.warped, out.area, seed, out.vacated);
  return out;
}

}  // namespace noisewarp::reference
