#include "noisewarp/flows.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace noisewarp {

FlowField uniform_flow(const Shape& shape, std::span<const double> displacement) {
  if (displacement.size() != shape.rank()) {
    throw std::invalid_argument("displacement needs one component per axis");
  }
  FlowField flow(shape);
  for (std::size_t p = 0; p < shape.pixel_count(); ++p) {
    for (std::size_t a = 0; a < shape.rank(); ++a) flow.set(p, a, displacement[a]);
  }
  return flow;
}

FlowField vortex_flow(const Shape& shape, double max_angle, double sigma) {
  if (shape.rank() != 2) throw std::invalid_argument("vortex flow is 2D");
  FlowField flow(shape);
  const double cx = 0.5 * static_cast<double>(shape[0]);
  const double cy = 0.5 * static_cast<double>(shape[1]);
  for (std::size_t i = 0; i < shape[0]; ++i) {
    for (std::size_t j = 0; j < shape[1]; ++j) {
      const double rx = static_cast<double>(i) + 0.5 - cx;
      const double ry = static_cast<double>(j) + 0.5 - cy;
      const double theta = max_angle * std::exp(-(rx * rx + ry * ry) / (2.0 * sigma * sigma));
      const double c = std::cos(theta), s = std::sin(theta);
      const std::size_t p = shape.index(i, j);
      flow.set(p, 0, (c - 1.0) * rx - s * ry);
      flow.set(p, 1, s * rx + (c - 1.0) * ry);
    }
  }
  return flow;
}

FlowField shear_flow(const Shape& shape, double kappa) {
  if (shape.rank() != 2) throw std::invalid_argument("shear flow is 2D");
  FlowField flow(shape);
  for (std::size_t i = 0; i < shape[0]; ++i) {
    for (std::size_t j = 0; j < shape[1]; ++j) {
      flow.set(shape.index(i, j), 0, kappa * (static_cast<double>(j) + 0.5));
    }
  }
  return flow;
}

FlowField collapse_flow(const Shape& shape, std::span<const double> point) {
  if (point.size() != shape.rank()) throw std::invalid_argument("point needs one coordinate per axis");
  FlowField flow(shape);
  std::vector<std::size_t> coords(shape.rank());
  for (std::size_t p = 0; p < shape.pixel_count(); ++p) {
    shape.unravel(p, coords);
    for (std::size_t a = 0; a < shape.rank(); ++a) {
      flow.set(p, a, point[a] - (static_cast<double>(coords[a]) + 0.5));
    }
  }
  return flow;
}

FlowField random_smooth_flow(const Shape& shape, double amplitude, std::uint64_t seed) {
  constexpr std::size_t kModes = 3;
  const std::size_t rank = shape.rank();
  struct Mode {
    std::vector<double> wave;  // cycles per grid extent, per axis
    double phase;
    double weight;
  };
  std::vector<std::vector<Mode>> modes(rank);
  std::uint32_t draw = 0;
  auto uniform = [&] { return uniform01({seed, 0, 0, draw++, Stream::experiment}); };
  for (std::size_t a = 0; a < rank; ++a) {
    for (std::size_t m = 0; m < kModes; ++m) {
      Mode mode;
      for (std::size_t b = 0; b < rank; ++b) mode.wave.push_back(2.0 * uniform() - 1.0);
      mode.phase = 2.0 * std::numbers::pi * uniform();
      mode.weight = amplitude / static_cast<double>(kModes) * (2.0 * uniform() - 1.0);
      modes[a].push_back(std::move(mode));
    }
  }
  FlowField flow(shape);
  std::vector<std::size_t> coords(rank);
  for (std::size_t p = 0; p < shape.pixel_count(); ++p) {
    shape.unravel(p, coords);
    for (std::size_t a = 0; a < rank; ++a) {
      double v = 0.0;
      for (const auto& mode : modes[a]) {
        double arg = mode.phase;
        for (std::size_t b = 0; b < rank; ++b) {
          arg += 2.0 * std::numbers::pi * mode.wave[b] * (static_cast<double>(coords[b]) + 0.5) /
                 static_cast<double>(shape[b]);
        }
        v += mode.weight * std::sin(arg);
      }
      flow.set(p, a, v);
    }
  }
  return flow;
}

}  // namespace noisewarp
