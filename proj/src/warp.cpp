#include "noisewarp/warp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "noisewarp/bridge.hpp"

namespace noisewarp {

void normalize_and_refill(NoiseTensor& accum, std::span<const double> area, std::uint64_t seed,
                          std::vector<std::uint32_t>& vacated) {
  const auto n = static_cast<std::int64_t>(accum.pixel_count());
  vacated.clear();
  for (std::int64_t d = 0; d < n; ++d) {
    if (!(area[d] > 0.0)) vacated.push_back(static_cast<std::uint32_t>(d));
  }
  for (std::size_t ch = 0; ch < accum.channels(); ++ch) {
    auto plane = accum.channel(ch);
#pragma omp parallel for schedule(static)
    for (std::int64_t d = 0; d < n; ++d) {
      if (area[d] > 0.0) {
        plane[d] /= std::sqrt(area[d]);
      } else {
        plane[d] = standard_normal({seed, static_cast<std::uint64_t>(d),
                                    static_cast<std::uint32_t>(ch), 0, Stream::refill});
      }
    }
  }
}

WarpOutput warp_noise(const NoiseTensor& prior, const PartitionRecord& record,
                      std::uint64_t seed) {
  if (!(prior.shape() == record.shape())) {
    throw std::invalid_argument("partition record shape does not match the prior");
  }
  const std::size_t pixels = prior.pixel_count();
  const auto sources = static_cast<std::int64_t>(record.source_count());
  const auto offsets = record.offsets();
  const auto entries = record.all_entries();

  // Clamped bridge time per entry. Geometry only, so shared by all channels.
  std::vector<double> consumed(entries.size());
  std::size_t clamp_events = 0;
#pragma omp parallel for schedule(static) reduction(+ : clamp_events)
  for (std::int64_t s = 0; s < sources; ++s) {
    double t = 0.0;
    for (std::size_t k = offsets[s]; k < offsets[s + 1]; ++k) {
      const double requested = t + entries[k].area;
      if (requested > 1.0 + kClampTolerance) ++clamp_events;
      const double t_next = std::min(requested, 1.0);
      consumed[k] = t_next - t;
      t = t_next;
    }
  }

  WarpOutput out{NoiseTensor(prior.shape(), prior.channels()),
                 std::vector<double>(pixels, 0.0),
                 {},
                 clamp_events};
  for (std::size_t k = 0; k < entries.size(); ++k) out.area[entries[k].dest] += consumed[k];

  std::vector<double> increments(entries.size());
  for (std::size_t ch = 0; ch < prior.channels(); ++ch) {
    const auto c_plane = prior.channel(ch);
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < sources; ++s) {
      BridgeState state{c_plane[s], 0.0, 0.0};
      RngKey key{seed, static_cast<std::uint64_t>(s), static_cast<std::uint32_t>(ch), 0,
                 Stream::bridge};
      for (std::size_t k = offsets[s]; k < offsets[s + 1]; ++k) {
        const BridgeState next = bridge_step(state, consumed[k], key);
        increments[k] = next.q - state.q;
        state = next;
        ++key.draw;
      }
    }
    // Fixed-order scatter: every destination sums its increments in source order.
    auto plane = out.warped.channel(ch);
    for (std::size_t k = 0; k < entries.size(); ++k) plane[entries[k].dest] += increments[k];
  }

  normalize_and_refill(out.warped, out.area, seed, out.vacated);
  if (!out.warped.all_finite()) throw InvariantError("warp produced non-finite values");
  return out;
}

std::vector<NoiseTensor> warp_sequence(const NoiseTensor& prior, std::span<const FlowField> flows,
                                       PartitionMethod method, std::uint64_t seed) {
  std::vector<NoiseTensor> frames;
  frames.reserve(flows.size() + 1);
  frames.push_back(prior);
  for (std::size_t k = 0; k < flows.size(); ++k) {
    if (!(flows[k].shape() == prior.shape())) {
      throw std::invalid_argument("flow " + std::to_string(k) + " shape does not match the noise");
    }
    const PartitionRecord record = build_partition(flows[k], method);
    frames.push_back(warp_noise(frames.back(), record, derive_seed(seed, k)).warped);
  }
  return frames;
}

}  // namespace noisewarp
