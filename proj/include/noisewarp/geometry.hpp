#pragma once

// Planar polygons in pixel coordinates: x runs along axis 0, y along axis 1.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "noisewarp/core.hpp"

namespace noisewarp {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

struct Polygon {
  std::vector<Point2> vertices;
  bool empty() const { return vertices.size() < 3; }
};

// Absolute shoelace area; 0 for fewer than three vertices.
double polygon_area(std::span<const Point2> vertices);
inline double polygon_area(const Polygon& poly) { return polygon_area(poly.vertices); }

// Sutherland-Hodgman clip against the axis-aligned box [x0,x1]x[y0,y1].
// `scratch` is working storage; both vectors are reused without shrinking.
void clip_polygon_to_box(std::span<const Point2> poly, double x0, double x1, double y0, double y1,
                         std::vector<Point2>& out, std::vector<Point2>& scratch);

// Clip against the unit cell [u,u+1]x[v,v+1]. May return an empty polygon.
Polygon clip_polygon_to_cell(const Polygon& poly, std::size_t u, std::size_t v);

// Even-odd rule.
bool point_in_polygon(std::span<const Point2> vertices, Point2 p);

// Flow at an arbitrary point, bilinearly interpolated between pixel-centre
// samples and clamped at the grid edge. Requires a 2D flow.
Point2 interpolate_flow(const FlowField& flow, Point2 p);

// Image of pixel square (i,j) under psi, discretised by its 4 corners and
// 4 edge midpoints in cyclic order.
Polygon warp_square_to_octagon(const FlowField& flow, std::size_t i, std::size_t j);
std::array<Point2, 8> octagon_vertices(const FlowField& flow, std::size_t i, std::size_t j);

struct BoundingBox {
  double x0, x1, y0, y1;
};
BoundingBox bounding_box(std::span<const Point2> vertices);

}  // namespace noisewarp
