#pragma once

// Single Sutherland-Hodgman pass shared by the public clipper and the grid
// partition kernel, so both produce identical vertices.

#include <array>
#include <cstddef>
#include <span>

#include "noisewarp/geometry.hpp"

namespace noisewarp::detail {

// Keeps {p : sign * (p[Axis] - bound) <= 0}; emits output vertices via push.
template <int Axis, typename Push>
void clip_pass(std::span<const Point2> in, double bound, double sign, Push&& push) {
  const std::size_t n = in.size();
  if (n == 0) return;
  auto coord = [](const Point2& p) { return Axis == 0 ? p.x : p.y; };
  auto inside = [&](const Point2& p) { return sign * (coord(p) - bound) <= 0.0; };
  auto crossing = [&](const Point2& a, const Point2& b) {
    const double t = (bound - coord(a)) / (coord(b) - coord(a));
    if constexpr (Axis == 0) {
      return Point2{bound, a.y + t * (b.y - a.y)};
    } else {
      return Point2{a.x + t * (b.x - a.x), bound};
    }
  };
  Point2 prev = in[n - 1];
  bool prev_in = inside(prev);
  for (std::size_t k = 0; k < n; ++k) {
    const Point2 cur = in[k];
    const bool cur_in = inside(cur);
    if (cur_in) {
      if (!prev_in) push(crossing(prev, cur));
      push(cur);
    } else if (prev_in) {
      push(crossing(prev, cur));
    }
    prev = cur;
    prev_in = cur_in;
  }
}

// Fixed-capacity polygon. Each pass adds at most n/2 vertices, so an octagon
// clipped by four half-planes stays below 41.
struct SmallPolygon {
  std::array<Point2, 48> v;
  std::size_t n = 0;
  std::span<const Point2> span() const { return {v.data(), n}; }
  void push(const Point2& p) { v[n++] = p; }
};

template <int Axis>
void clip_pass(const SmallPolygon& in, double bound, double sign, SmallPolygon& out) {
  out.n = 0;
  clip_pass<Axis>(in.span(), bound, sign, [&](const Point2& p) { out.push(p); });
}

}  // namespace noisewarp::detail
