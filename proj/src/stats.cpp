#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "noisewarp/evaluation.hpp"

namespace noisewarp {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double kolmogorov_survival(double lambda) {
  constexpr double kTermFloor = 1e-10;
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    // Jacobi-theta form of the CDF converges fast for small lambda.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double cdf = 0.0;
    for (int k = 1;; k += 2) {
      const double term = std::exp(-static_cast<double>(k * k) * pi2 / (8.0 * lambda * lambda));
      cdf += term;
      if (term < kTermFloor) break;
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0.0;
  for (int k = 1;; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    q += (k % 2 ? 2.0 : -2.0) * term;
    if (term < kTermFloor) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

StatReport ks_test_standard_normal(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 10) throw std::invalid_argument("K-S test needs at least 10 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto nd = static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = normal_cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / nd - f, f - static_cast<double>(i) / nd});
  }
  return {"kolmogorov-smirnov", d, kolmogorov_survival(std::sqrt(nd) * d), n};
}

StatReport morans_i(std::span<const double> image, std::size_t rows, std::size_t cols) {
  if (rows < 3 || cols < 3) throw std::invalid_argument("Moran's I needs at least a 3x3 image");
  if (image.size() != rows * cols) throw std::invalid_argument("image size does not match rows x cols");
  const std::size_t n = rows * cols;
  const auto nd = static_cast<double>(n);

  double mean = 0.0;
  for (const double v : image) mean += v;
  mean /= nd;

  double m2 = 0.0;
  double cross = 0.0;  // sum over unordered rook pairs of z_a * z_b
  double s2 = 0.0;     // sum over cells of (2 * degree)^2
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double z = image[i * cols + j] - mean;
      m2 += z * z;
      if (i + 1 < rows) cross += z * (image[(i + 1) * cols + j] - mean);
      if (j + 1 < cols) cross += z * (image[i * cols + j + 1] - mean);
      const double degree = static_cast<double>((i > 0) + (i + 1 < rows) + (j > 0) + (j + 1 < cols));
      s2 += 4.0 * degree * degree;
    }
  }
  const double edges = static_cast<double>(rows * (cols - 1) + cols * (rows - 1));
  const double w = 2.0 * edges;  // sum of all w_ij
  const double s1 = 2.0 * w;

  StatReport report{"morans-i", 0.0, 1.0, n};
  const double expected = -1.0 / (nd - 1.0);
  if (!(m2 > 0.0)) {
    report.statistic = expected;
    return report;
  }
  report.statistic = (nd / w) * (2.0 * cross) / m2;
  const double variance =
      (nd * nd * s1 - nd * s2 + 3.0 * w * w) / (w * w * (nd * nd - 1.0)) - expected * expected;
  const double z = (report.statistic - expected) / std::sqrt(variance);
  report.p_value = std::clamp(std::erfc(std::abs(z) / std::numbers::sqrt2), 0.0, 1.0);
  return report;
}

StatReport morans_i(const NoiseTensor& image) {
  if (image.shape().rank() != 2 || image.channels() != 1) {
    throw std::invalid_argument("Moran's I needs a single-channel 2D tensor");
  }
  return morans_i(image.data(), image.shape()[0], image.shape()[1]);
}

double wasserstein2_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("Wasserstein distance of an empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const std::size_t na = x.size();
  const std::size_t nb = y.size();
  // Walk both quantile functions on the common grid of breakpoints k/(na*nb).
  std::size_t i = 0, j = 0, prev = 0;
  double acc = 0.0;
  while (i < na && j < nb) {
    const std::size_t next_a = (i + 1) * nb;
    const std::size_t next_b = (j + 1) * na;
    const std::size_t next = std::min(next_a, next_b);
    const double diff = x[i] - y[j];
    acc += static_cast<double>(next - prev) * diff * diff;
    prev = next;
    if (next_a == next) ++i;
    if (next_b == next) ++j;
  }
  return std::sqrt(acc / static_cast<double>(na * nb));
}

}  // namespace noisewarp
