#pragma once

// Timing harness shared by the `bench` subcommand and the acceptance suite.
// A timed rep covers partition construction (or upsampling plan) plus the
// warp itself; prior generation and flow setup happen before timing starts.

#include <cstddef>
#include <cstdint>
#include <string>

namespace noisewarp::cli {

struct BenchConfig {
  std::size_t size = 1024;
  std::size_t reps = 5;
  std::string method = "grid";  // grid | particle | hiwyn
  std::size_t upsample = 8;
  std::uint64_t seed = 0;
};

struct BenchStats {
  std::size_t reps = 0;
  double median_ms = 0, mean_ms = 0, min_ms = 0, mad_ms = 0;
  // Peak heap above the pre-kernel baseline, during one rep.
  std::size_t kernel_peak_bytes = 0;
  std::size_t max_rss_bytes = 0;
};

// Throws std::invalid_argument for an unknown method or zero size/reps.
BenchStats run_bench(const BenchConfig& config);

}  // namespace noisewarp::cli
