#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "memtrack.hpp"
#include "noisewarp/flows.hpp"
#include "noisewarp/hiwyn.hpp"
#include "noisewarp/partition.hpp"
#include "noisewarp/warp.hpp"

namespace noisewarp::cli {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

BenchStats run_bench(const BenchConfig& config) {
  if (config.size == 0 || config.reps == 0) {
    throw std::invalid_argument("bench size and reps must be positive");
  }
  if (config.method != "grid" && config.method != "particle" && config.method != "hiwyn") {
    throw std::invalid_argument("bench method must be grid, particle or hiwyn");
  }
  if (config.method == "hiwyn" && config.upsample == 0) {
    throw std::invalid_argument("upsampling level must be >= 1");
  }
  const auto n = static_cast<std::int64_t>(config.size);
  const Shape shape{n, n};
  const NoiseTensor prior = make_prior_noise(shape, 1, config.seed);
  const FlowField flow = vortex_flow(shape, 1.0, static_cast<double>(config.size) / 4.0);

  auto kernel = [&](std::uint64_t seed) {
    if (config.method == "hiwyn") {
      const HiwynPlan plan(flow, config.upsample);
      return hiwyn_warp(prior, plan, seed).warped.data()[0];
    }
    const auto method = config.method == "grid" ? PartitionMethod::grid : PartitionMethod::particle;
    const PartitionRecord record = build_partition(flow, method);
    return warp_noise(prior, record, seed).warped.data()[0];
  };

  BenchStats stats;
  stats.reps = config.reps;
  std::vector<double> ms;
  volatile double sink = 0.0;
  for (std::size_t r = 0; r < config.reps; ++r) {
    const std::size_t baseline = memtrack::current_bytes();
    memtrack::reset_peak();
    const auto start = std::chrono::steady_clock::now();
    sink = sink + kernel(derive_seed(config.seed, r));
    const auto stop = std::chrono::steady_clock::now();
    stats.kernel_peak_bytes = std::max(stats.kernel_peak_bytes, memtrack::peak_bytes() - baseline);
    ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }

  stats.median_ms = median(ms);
  stats.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
  stats.min_ms = *std::min_element(ms.begin(), ms.end());
  std::vector<double> dev;
  for (const double t : ms) dev.push_back(std::abs(t - stats.median_ms));
  stats.mad_ms = median(dev);
  stats.max_rss_bytes = memtrack::max_rss_bytes();
  return stats;
}

}  // namespace noisewarp::cli
