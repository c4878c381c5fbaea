#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "noisewarp/evaluation.hpp"

namespace noisewarp {

namespace {

struct Taps {
  std::array<std::size_t, 4> index{};
  std::array<double, 4> weight{};
  std::size_t count = 0;
};

std::size_t clamp_index(std::int64_t i, std::size_t extent) {
  return static_cast<std::size_t>(std::clamp<std::int64_t>(i, 0, static_cast<std::int64_t>(extent) - 1));
}

// Keys cubic convolution, a = -0.5.
double keys(double x) {
  x = std::abs(x);
  if (x <= 1.0) return (1.5 * x - 2.5) * x * x + 1.0;
  if (x < 2.0) return ((-0.5 * x + 2.5) * x - 4.0) * x + 2.0;
  return 0.0;
}

// `s` is the sample position in pixel-centre index space.
Taps axis_taps(double s, std::size_t extent, InterpMode mode) {
  Taps t;
  const double base = std::floor(s);
  const double f = s - base;
  const auto i0 = static_cast<std::int64_t>(base);
  switch (mode) {
    case InterpMode::nearest:
      t.index[0] = clamp_index(static_cast<std::int64_t>(std::floor(s + 0.5)), extent);
      t.weight[0] = 1.0;
      t.count = 1;
      break;
    case InterpMode::bilinear:
      t.index = {clamp_index(i0, extent), clamp_index(i0 + 1, extent)};
      t.weight = {1.0 - f, f};
      t.count = 2;
      break;
    case InterpMode::bicubic:
      for (std::int64_t k = 0; k < 4; ++k) {
        t.index[k] = clamp_index(i0 - 1 + k, extent);
        t.weight[k] = keys(f - static_cast<double>(k - 1));
      }
      t.count = 4;
      break;
  }
  return t;
}

}  // namespace

NoiseTensor warp_interpolated(const NoiseTensor& noise, const FlowField& flow, InterpMode mode) {
  if (!(noise.shape() == flow.shape())) {
    throw std::invalid_argument("flow shape does not match the noise");
  }
  const Shape& shape = noise.shape();
  const std::size_t rank = shape.rank();
  NoiseTensor out(shape, noise.channels());
  const auto n = static_cast<std::int64_t>(shape.pixel_count());

#pragma omp parallel for schedule(static)
  for (std::int64_t p = 0; p < n; ++p) {
    std::array<std::size_t, 3> coords{};
    shape.unravel(static_cast<std::size_t>(p), std::span<std::size_t>(coords.data(), rank));
    std::array<Taps, 3> taps;
    for (std::size_t a = 0; a < rank; ++a) {
      const double s = static_cast<double>(coords[a]) + flow.component(static_cast<std::size_t>(p), a);
      taps[a] = axis_taps(s, shape[a], mode);
    }
    if (rank == 2) taps[2] = {{0}, {1.0}, 1};
    const std::size_t depth = rank == 3 ? shape[2] : 1;
    for (std::size_t ch = 0; ch < noise.channels(); ++ch) {
      const auto plane = noise.channel(ch);
      double acc = 0.0;
      for (std::size_t a = 0; a < taps[0].count; ++a) {
        for (std::size_t b = 0; b < taps[1].count; ++b) {
          for (std::size_t c = 0; c < taps[2].count; ++c) {
            const std::size_t idx = (taps[0].index[a] * shape[1] + taps[1].index[b]) * depth +
                                    taps[2].index[c];
            acc += taps[0].weight[a] * taps[1].weight[b] * taps[2].weight[c] * plane[idx];
          }
        }
      }
      out.at(ch, static_cast<std::size_t>(p)) = acc;
    }
  }
  return out;
}

}  // namespace noisewarp
