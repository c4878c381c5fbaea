#include "noisewarp/hiwyn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "noisewarp/bridge.hpp"
#include "noisewarp/geometry.hpp"
#include "record_builder.hpp"

namespace noisewarp {

namespace {

void atomic_min(std::uint32_t& slot, std::uint32_t value) {
  std::atomic_ref<std::uint32_t> ref(slot);
  std::uint32_t cur = ref.load(std::memory_order_relaxed);
  while (value < cur && !ref.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
  }
}

// Subpixels of `source` inside `box`, as local (a, b) ranges.
struct LocalRange {
  std::int64_t a0, a1, b0, b1;
};

LocalRange local_range(const HiwynPlan::FineBox& box, std::int64_t si, std::int64_t sj,
                       std::int64_t n) {
  return {std::max(box.x0 - si * n, std::int64_t{0}), std::min(box.x1 - si * n, n - 1),
          std::max(box.y0 - sj * n, std::int64_t{0}), std::min(box.y1 - sj * n, n - 1)};
}

// Visits every source pixel overlapping `box` in row-major order.
template <typename Visit>
void for_each_source(const HiwynPlan::FineBox& box, std::int64_t n, std::size_t cols,
                     Visit&& visit) {
  if (box.x0 > box.x1 || box.y0 > box.y1) return;
  for (std::int64_t si = box.x0 / n; si <= box.x1 / n; ++si) {
    for (std::int64_t sj = box.y0 / n; sj <= box.y1 / n; ++sj) {
      visit(static_cast<std::size_t>(si) * cols + static_cast<std::size_t>(sj),
            local_range(box, si, sj, n));
    }
  }
}

void check_inputs(const NoiseTensor& prior, const HiwynPlan& plan) {
  if (!(prior.shape() == plan.shape())) {
    throw std::invalid_argument("flow shape does not match the prior");
  }
}

}  // namespace

HiwynPlan::HiwynPlan(const FlowField& flow, std::size_t n) : shape_(flow.shape()), n_(n) {
  if (n == 0) throw std::invalid_argument("upsampling level must be >= 1");
  if (flow.rank() != 2) throw std::invalid_argument("upsampling warp needs a 2D flow");
  if (!flow.all_finite()) throw std::invalid_argument("flow contains non-finite values");
  const std::size_t rows = shape_[0];
  const std::size_t cols = shape_[1];
  const std::size_t pixels = shape_.pixel_count();
  const auto ni = static_cast<std::int64_t>(n);
  const auto nd = static_cast<double>(n);
  const std::size_t per_pixel = n * n;

  owner_.assign(pixels * per_pixel, kUnowned);
  dest_boxes_.resize(pixels);

  const auto count = static_cast<std::int64_t>(pixels);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t d = 0; d < count; ++d) {
    const auto dest = static_cast<std::size_t>(d);
    const auto octagon = octagon_vertices(flow, dest / cols, dest % cols);
    BoundingBox bb = bounding_box(octagon);
    bb.x0 = std::clamp(bb.x0, -1.0, static_cast<double>(rows) + 1.0);
    bb.x1 = std::clamp(bb.x1, -1.0, static_cast<double>(rows) + 1.0);
    bb.y0 = std::clamp(bb.y0, -1.0, static_cast<double>(cols) + 1.0);
    bb.y1 = std::clamp(bb.y1, -1.0, static_cast<double>(cols) + 1.0);
    // Subpixel fx has centre (fx + 0.5) / N.
    FineBox box{std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(bb.x0 * nd - 0.5))),
                std::min<std::int64_t>(static_cast<std::int64_t>(rows) * ni - 1,
                                       static_cast<std::int64_t>(std::floor(bb.x1 * nd - 0.5))),
                std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(bb.y0 * nd - 0.5))),
                std::min<std::int64_t>(static_cast<std::int64_t>(cols) * ni - 1,
                                       static_cast<std::int64_t>(std::floor(bb.y1 * nd - 0.5)))};
    dest_boxes_[dest] = box;
    for_each_source(box, ni, cols, [&](std::size_t source, const LocalRange& r) {
      const auto si = static_cast<std::int64_t>(source / cols);
      const auto sj = static_cast<std::int64_t>(source % cols);
      for (std::int64_t a = r.a0; a <= r.a1; ++a) {
        for (std::int64_t b = r.b0; b <= r.b1; ++b) {
          const Point2 centre{(static_cast<double>(si * ni + a) + 0.5) / nd,
                              (static_cast<double>(sj * ni + b) + 0.5) / nd};
          if (point_in_polygon(octagon, centre)) {
            atomic_min(owner_[source * per_pixel + static_cast<std::size_t>(a * ni + b)],
                       static_cast<std::uint32_t>(dest));
          }
        }
      }
    });
  }

  auto blocks = detail::collect_requests(
      pixels, [&](std::size_t dest, detail::RequestBlock& out) {
        for_each_source(dest_boxes_[dest], ni, cols, [&](std::size_t source, const LocalRange& r) {
          std::uint32_t owned = 0;
          for (std::int64_t a = r.a0; a <= r.a1; ++a) {
            for (std::int64_t b = r.b0; b <= r.b1; ++b) {
              owned += owner_[source * per_pixel + static_cast<std::size_t>(a * ni + b)] == dest;
            }
          }
          if (owned > 0) {
            out.push_back({static_cast<std::uint32_t>(source), static_cast<std::uint32_t>(dest),
                           static_cast<double>(owned)});
          }
        });
      });

  dest_offsets_.assign(pixels + 1, 0);
  dest_count_.assign(pixels, 0);
  for (const auto& block : blocks) {
    for (const auto& r : block) {
      ++dest_offsets_[r.dest + 1];
      dest_count_[r.dest] += static_cast<std::uint32_t>(r.weight);
      dest_shares_.push_back({r.source, static_cast<std::uint32_t>(r.weight)});
    }
  }
  for (std::size_t d = 0; d < pixels; ++d) dest_offsets_[d + 1] += dest_offsets_[d];

  auto grouped = detail::group_by_source(pixels, blocks);
  source_offsets_ = std::move(grouped.offsets);
  source_shares_.reserve(grouped.entries.size());
  for (const auto& e : grouped.entries) {
    source_shares_.push_back({e.dest, static_cast<std::uint32_t>(e.area)});
  }
}

WarpOutput hiwyn_warp(const NoiseTensor& prior, const HiwynPlan& plan, std::uint64_t seed) {
  check_inputs(prior, plan);
  const std::size_t pixels = prior.pixel_count();
  const std::size_t cols = plan.shape()[1];
  const std::size_t per_pixel = plan.subpixels_per_pixel();
  const auto ni = static_cast<std::int64_t>(plan.level());
  const auto count = static_cast<std::int64_t>(pixels);

  WarpOutput out{NoiseTensor(prior.shape(), prior.channels()), std::vector<double>(pixels), {}, 0};
  for (std::size_t d = 0; d < pixels; ++d) {
    out.area[d] = static_cast<double>(plan.dest_count(d)) / static_cast<double>(per_pixel);
  }

  std::vector<double> upsampled(pixels * per_pixel);
  for (std::size_t ch = 0; ch < prior.channels(); ++ch) {
    const auto c_plane = prior.channel(ch);
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < count; ++s) {
      sample_upsampled_subimage(
          c_plane[s], plan.level(),
          {seed, static_cast<std::uint64_t>(s), static_cast<std::uint32_t>(ch), 0, Stream::upsample},
          std::span<double>(upsampled).subspan(static_cast<std::size_t>(s) * per_pixel, per_pixel));
    }

    auto plane = out.warped.channel(ch);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t d = 0; d < count; ++d) {
      const auto dest = static_cast<std::size_t>(d);
      double sum = 0.0;
      std::size_t next = 0;
      const auto shares = plan.sources_of(dest);
      for_each_source(plan.dest_box(dest), ni, cols, [&](std::size_t source, const LocalRange& r) {
        if (next >= shares.size() || shares[next].pixel != source) return;
        if (shares[next++].count == per_pixel) {
          // All subpixels of the source: their sum is the prior value itself.
          sum += c_plane[source];
          return;
        }
        double partial = 0.0;
        for (std::int64_t a = r.a0; a <= r.a1; ++a) {
          for (std::int64_t b = r.b0; b <= r.b1; ++b) {
            const std::size_t sub = static_cast<std::size_t>(a * ni + b);
            if (plan.owner(source, sub) == dest) partial += upsampled[source * per_pixel + sub];
          }
        }
        sum += partial;
      });
      plane[dest] = sum;
    }
  }

  normalize_and_refill(out.warped, out.area, seed, out.vacated);
  return out;
}

WarpOutput hiwyn_warp_eulerian(const NoiseTensor& prior, const HiwynPlan& plan,
                               std::uint64_t seed) {
  check_inputs(prior, plan);
  const std::size_t pixels = prior.pixel_count();
  const std::size_t per_pixel = plan.subpixels_per_pixel();
  const auto count = static_cast<std::int64_t>(pixels);

  WarpOutput out{NoiseTensor(prior.shape(), prior.channels()), std::vector<double>(pixels), {}, 0};
  for (std::size_t d = 0; d < pixels; ++d) {
    out.area[d] = static_cast<double>(plan.dest_count(d)) / static_cast<double>(per_pixel);
  }

  std::vector<std::size_t> offsets(pixels + 1, 0);
  for (std::size_t s = 0; s < pixels; ++s) offsets[s + 1] = offsets[s] + plan.dests_of(s).size();
  std::vector<double> increments(offsets.back());

  for (std::size_t ch = 0; ch < prior.channels(); ++ch) {
    const auto c_plane = prior.channel(ch);
#pragma omp parallel
    {
      std::vector<double> prefix(per_pixel + 1);
#pragma omp for schedule(static)
      for (std::int64_t s = 0; s < count; ++s) {
        const auto shares = plan.dests_of(static_cast<std::size_t>(s));
        if (shares.empty()) continue;
        const double c = c_plane[s];
        auto x = std::span<double>(prefix).subspan(1);
        sample_upsampled_subimage(
            c, plan.level(),
            {seed, static_cast<std::uint64_t>(s), static_cast<std::uint32_t>(ch), 0,
             Stream::upsample},
            x);
        // prefix[k] = X_1 + ... + X_k, with the full sum pinned to c.
        prefix[0] = 0.0;
        for (std::size_t k = 1; k <= per_pixel; ++k) prefix[k] = prefix[k - 1] + prefix[k];
        prefix[per_pixel] = c;
        std::size_t covered = 0;
        std::size_t slot = offsets[s];
        for (const auto& share : shares) {
          const std::size_t before = covered;
          covered += share.count;
          increments[slot++] = prefix[covered] - prefix[before];
        }
      }
    }
    auto plane = out.warped.channel(ch);
    for (std::size_t s = 0; s < pixels; ++s) {
      std::size_t slot = offsets[s];
      for (const auto& share : plan.dests_of(s)) plane[share.pixel] += increments[slot++];
    }
  }

  normalize_and_refill(out.warped, out.area, seed, out.vacated);
  return out;
}

WarpOutput hiwyn_warp(const NoiseTensor& prior, const FlowField& flow, std::size_t n,
                      std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("upsampling level must be >= 1");
  if (!(prior.shape() == flow.shape())) {
    throw std::invalid_argument("flow shape does not match the prior");
  }
  return hiwyn_warp(prior, HiwynPlan(flow, n), seed);
}

WarpOutput hiwyn_warp_eulerian(const NoiseTensor& prior, const FlowField& flow, std::size_t n,
                               std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("upsampling level must be >= 1");
  if (!(prior.shape() == flow.shape())) {
    throw std::invalid_argument("flow shape does not match the prior");
  }
  return hiwyn_warp_eulerian(prior, HiwynPlan(flow, n), seed);
}

}  // namespace noisewarp
