#pragma once

// Synthetic deformation fields for experiments, tests and the CLI.

#include <cstdint>
#include <span>

#include "noisewarp/core.hpp"

namespace noisewarp {

// Same displacement at every pixel; displacement.size() == shape.rank().
FlowField uniform_flow(const Shape& shape, std::span<const double> displacement);

// 2D swirl about the grid centre: a point at radius r is rotated by
// max_angle * exp(-r^2 / (2 sigma^2)) radians. sigma is in pixels.
FlowField vortex_flow(const Shape& shape, double max_angle, double sigma);

// Linear shear: flow(x, y) = (kappa * y, 0) evaluated at pixel centres.
FlowField shear_flow(const Shape& shape, double kappa);

// Sends every pixel centre to `point`.
FlowField collapse_flow(const Shape& shape, std::span<const double> point);

// Sum of a few random low-frequency sinusoids per component, peak
// displacement bounded by `amplitude` pixels. Works in 2D and 3D.
FlowField random_smooth_flow(const Shape& shape, double amplitude, std::uint64_t seed);

}  // namespace noisewarp
