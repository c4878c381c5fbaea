#include "noisewarp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "clip.hpp"

namespace noisewarp {

double polygon_area(std::span<const Point2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) return 0.0;
  // Shoelace relative to the first vertex to limit cancellation far from the origin.
  const Point2 o = vertices[0];
  double twice = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double ax = vertices[k].x - o.x;
    const double ay = vertices[k].y - o.y;
    const double bx = vertices[k + 1].x - o.x;
    const double by = vertices[k + 1].y - o.y;
    twice += ax * by - bx * ay;
  }
  return 0.5 * std::abs(twice);
}

namespace {

template <int Axis>
void clip_half_plane(std::span<const Point2> in, double bound, double sign,
                     std::vector<Point2>& out) {
  out.clear();
  detail::clip_pass<Axis>(in, bound, sign, [&](const Point2& p) { out.push_back(p); });
}

}  // namespace

void clip_polygon_to_box(std::span<const Point2> poly, double x0, double x1, double y0, double y1,
                         std::vector<Point2>& out, std::vector<Point2>& scratch) {
  clip_half_plane<0>(poly, x0, -1.0, out);
  clip_half_plane<0>(out, x1, 1.0, scratch);
  clip_half_plane<1>(scratch, y0, -1.0, out);
  clip_half_plane<1>(out, y1, 1.0, scratch);
  out.swap(scratch);
}

Polygon clip_polygon_to_cell(const Polygon& poly, std::size_t u, std::size_t v) {
  Polygon result;
  std::vector<Point2> scratch;
  const auto x0 = static_cast<double>(u);
  const auto y0 = static_cast<double>(v);
  clip_polygon_to_box(poly.vertices, x0, x0 + 1.0, y0, y0 + 1.0, result.vertices, scratch);
  if (result.vertices.size() < 3) result.vertices.clear();
  return result;
}

bool point_in_polygon(std::span<const Point2> vertices, Point2 p) {
  bool in = false;
  const std::size_t n = vertices.size();
  for (std::size_t k = 0, prev = n - 1; k < n; prev = k++) {
    const Point2 a = vertices[prev];
    const Point2 b = vertices[k];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) in = !in;
    }
  }
  return in;
}

Point2 interpolate_flow(const FlowField& flow, Point2 p) {
  const Shape& shape = flow.shape();
  if (shape.rank() != 2) throw std::invalid_argument("interpolate_flow needs a 2D flow");
  auto taps = [](double coord, std::size_t extent, std::size_t& lo, std::size_t& hi, double& f) {
    const double s = std::clamp(coord - 0.5, 0.0, static_cast<double>(extent - 1));
    lo = static_cast<std::size_t>(std::floor(s));
    if (lo + 1 >= extent) lo = extent >= 2 ? extent - 2 : 0;
    hi = std::min(lo + 1, extent - 1);
    f = s - static_cast<double>(lo);
  };
  std::size_t i0, i1, j0, j1;
  double fx, fy;
  taps(p.x, shape[0], i0, i1, fx);
  taps(p.y, shape[1], j0, j1, fy);
  const std::size_t p00 = shape.index(i0, j0), p01 = shape.index(i0, j1);
  const std::size_t p10 = shape.index(i1, j0), p11 = shape.index(i1, j1);
  Point2 out;
  for (std::size_t a = 0; a < 2; ++a) {
    // a + f*(b-a) keeps constant fields exact.
    const double v00 = flow.component(p00, a), v10 = flow.component(p10, a);
    const double v0 = v00 + fy * (flow.component(p01, a) - v00);
    const double v1 = v10 + fy * (flow.component(p11, a) - v10);
    const double v = v0 + fx * (v1 - v0);
    (a == 0 ? out.x : out.y) = v;
  }
  return out;
}

std::array<Point2, 8> octagon_vertices(const FlowField& flow, std::size_t i, std::size_t j) {
  const auto x = static_cast<double>(i);
  const auto y = static_cast<double>(j);
  static constexpr double kOffsets[8][2] = {{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}, {1.0, 0.5},
                                            {1.0, 1.0}, {0.5, 1.0}, {0.0, 1.0}, {0.0, 0.5}};
  std::array<Point2, 8> out;
  for (std::size_t k = 0; k < 8; ++k) {
    const Point2 base{x + kOffsets[k][0], y + kOffsets[k][1]};
    const Point2 d = interpolate_flow(flow, base);
    out[k] = {base.x + d.x, base.y + d.y};
  }
  return out;
}

Polygon warp_square_to_octagon(const FlowField& flow, std::size_t i, std::size_t j) {
  const auto v = octagon_vertices(flow, i, j);
  return Polygon{{v.begin(), v.end()}};
}

BoundingBox bounding_box(std::span<const Point2> vertices) {
  BoundingBox box{vertices[0].x, vertices[0].x, vertices[0].y, vertices[0].y};
  for (const auto& p : vertices) {
    box.x0 = std::min(box.x0, p.x);
    box.x1 = std::max(box.x1, p.x);
    box.y0 = std::min(box.y0, p.y);
    box.y1 = std::max(box.y1, p.y);
  }
  return box;
}

}  // namespace noisewarp
