#pragma once

// Interpolation baselines and the statistics used to check that warped noise
// is still Gaussian white noise.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "noisewarp/core.hpp"

namespace noisewarp {

enum class InterpMode { nearest, bilinear, bicubic };

// Backward sampling: out(p) = noise(centre(p) + flow(p)), interpolated with
// edge clamping. No renormalisation. Works in 2D and 3D.
NoiseTensor warp_interpolated(const NoiseTensor& noise, const FlowField& flow, InterpMode mode);

struct StatReport {
  std::string test;
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t sample_size = 0;
};

double normal_cdf(double x);

// P(K > lambda) for the limiting Kolmogorov distribution.
double kolmogorov_survival(double lambda);

// One-sample K-S against N(0,1). Throws std::invalid_argument for n < 10.
StatReport ks_test_standard_normal(std::span<const double> samples);

// Moran's I with binary rook weights, normality-assumption variance and a
// two-sided normal p-value. Needs a single 2D plane of at least 3x3.
StatReport morans_i(std::span<const double> image, std::size_t rows, std::size_t cols);
StatReport morans_i(const NoiseTensor& image);

// 2-Wasserstein distance between the empirical distributions of a and b
// (exact quantile coupling; sizes may differ). Throws on empty input.
double wasserstein2_1d(std::span<const double> a, std::span<const double> b);

struct ConvergenceRow {
  std::size_t level = 0;
  double mean_w = 0.0;
  double max_w = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  // Infinite-resolution warp against itself with an independent seed.
  double self_mean_w = 0.0;
  double self_max_w = 0.0;
};

// For a fixed prior and flow, per-pixel W2 between the finite-N upsampling
// warp and the grid-partition bridge warp, estimated from `runs` independent
// runs each. Throws std::invalid_argument for runs < 1000.
ConvergenceResult convergence_experiment(const NoiseTensor& prior, const FlowField& flow,
                                         std::span<const std::size_t> levels, std::size_t runs,
                                         std::uint64_t seed);

}  // namespace noisewarp
