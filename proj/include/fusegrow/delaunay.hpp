#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace fusegrow {

struct IntPoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(const IntPoint&, const IntPoint&) = default;
};

/// Twice the signed area of (a,b,c); positive when counter-clockwise (x
/// right, y up). Exact for |coordinates| < 2^30.
std::int64_t orient2d(const IntPoint& a, const IntPoint& b, const IntPoint& c);

/// Positive when d lies strictly inside the circumcircle of the
/// counter-clockwise triangle (a,b,c), zero when cocircular. Exact for
/// |coordinates| < 2^30 (128-bit intermediates).
int incircle_sign(const IntPoint& a, const IntPoint& b, const IntPoint& c, const IntPoint& d);

/// Delaunay triangulation of distinct integer points. Triangles are
/// counter-clockwise vertex-index triples and cover the convex hull exactly.
/// Points are inserted in lexicographic (x,y) order; a cocircular quad keeps
/// the edge created first, so the output is a pure function of the input set.
/// Returns an empty list when all points are collinear or fewer than three.
std::vector<std::array<int, 3>> delaunay_triangulate(std::span<const IntPoint> points);

}  // namespace fusegrow
