#include <algorithm>
#include <stdexcept>
#include <vector>

#include "noisewarp/evaluation.hpp"
#include "noisewarp/hiwyn.hpp"
#include "noisewarp/partition.hpp"
#include "noisewarp/warp.hpp"

namespace noisewarp {

namespace {

// samples[pixel][run]
using PixelSamples = std::vector<std::vector<double>>;

template <typename Run>
PixelSamples collect(std::size_t pixels, std::size_t runs, Run&& run) {
  PixelSamples samples(pixels, std::vector<double>(runs));
  const auto count = static_cast<std::int64_t>(runs);
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < count; ++r) {
    const NoiseTensor out = run(static_cast<std::size_t>(r));
    for (std::size_t p = 0; p < pixels; ++p) samples[p][r] = out.at(0, p);
  }
  return samples;
}

std::pair<double, double> mean_max_distance(const PixelSamples& a, const PixelSamples& b) {
  double sum = 0.0, max = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) {
    const double w = wasserstein2_1d(a[p], b[p]);
    sum += w;
    max = std::max(max, w);
  }
  return {sum / static_cast<double>(a.size()), max};
}

}  // namespace

ConvergenceResult convergence_experiment(const NoiseTensor& prior, const FlowField& flow,
                                         std::span<const std::size_t> levels, std::size_t runs,
                                         std::uint64_t seed) {
  if (runs < 1000) throw std::invalid_argument("convergence experiment needs at least 1000 runs");
  if (prior.channels() != 1) throw std::invalid_argument("convergence experiment is single-channel");
  if (!(prior.shape() == flow.shape())) {
    throw std::invalid_argument("flow shape does not match the prior");
  }
  const std::size_t pixels = prior.pixel_count();
  const PartitionRecord record = build_grid_partition(flow);

  auto bridge_runs = [&](std::uint64_t stream_seed) {
    return collect(pixels, runs, [&](std::size_t r) {
      return warp_noise(prior, record, derive_seed(stream_seed, r)).warped;
    });
  };
  const PixelSamples reference = bridge_runs(derive_seed(seed, 0));

  ConvergenceResult result;
  {
    const PixelSamples independent = bridge_runs(derive_seed(seed, 1));
    std::tie(result.self_mean_w, result.self_max_w) = mean_max_distance(reference, independent);
  }
  for (const std::size_t level : levels) {
    const HiwynPlan plan(flow, level);
    const std::uint64_t level_seed = derive_seed(seed, 2 + level);
    const PixelSamples upsampled = collect(pixels, runs, [&](std::size_t r) {
      return hiwyn_warp(prior, plan, derive_seed(level_seed, r)).warped;
    });
    const auto [mean_w, max_w] = mean_max_distance(upsampled, reference);
    result.rows.push_back({level, mean_w, max_w});
  }
  return result;
}

}  // namespace noisewarp
