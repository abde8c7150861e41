#include "fusegrow/delaunay.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fusegrow {

std::int64_t orient2d(const IntPoint& a, const IntPoint& b, const IntPoint& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

int incircle_sign(const IntPoint& a, const IntPoint& b, const IntPoint& c, const IntPoint& d) {
  using i128 = __int128;
  const i128 adx = a.x - d.x, ady = a.y - d.y;
  const i128 bdx = b.x - d.x, bdy = b.y - d.y;
  const i128 cdx = c.x - d.x, cdy = c.y - d.y;
  const i128 alift = adx * adx + ady * ady;
  const i128 blift = bdx * bdx + bdy * bdy;
  const i128 clift = cdx * cdx + cdy * cdy;
  const i128 det = alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) +
                   clift * (adx * bdy - ady * bdx);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

namespace {

constexpr std::int64_t kCoordLimit = std::int64_t{1} << 28;

// Half-edge mesh. Half-edge e belongs to triangle e/3 and runs from
// vertex_[e] to vertex_[next(e)]; twin_[e] is the opposite half-edge or -1 on
// the hull.
class SweepTriangulator {
 public:
  explicit SweepTriangulator(std::span<const IntPoint> pts) : pts_(pts) {
    const std::size_t n = pts.size();
    hull_next_.assign(n, -1);
    hull_prev_.assign(n, -1);
    hull_edge_.assign(n, -1);
  }

  std::vector<std::array<int, 3>> run(const std::vector<int>& order) {
    const std::size_t n = order.size();
    if (n < 3) return {};
    std::size_t k = 2;
    while (k < n && orient2d(pts_[order[0]], pts_[order[1]], pts_[order[k]]) == 0) ++k;
    if (k == n) return {};
    seed_fan(order, k);
    int last = order[k];
    for (std::size_t i = k + 1; i < n; ++i) {
      insert(order[i], last);
      last = order[i];
    }
    std::vector<std::array<int, 3>> tris(vertex_.size() / 3);
    for (std::size_t t = 0; t < tris.size(); ++t)
      tris[t] = {vertex_[3 * t], vertex_[3 * t + 1], vertex_[3 * t + 2]};
    return tris;
  }

 private:
  static int next(int e) { return e % 3 == 2 ? e - 2 : e + 1; }
  static int prev(int e) { return e % 3 == 0 ? e + 2 : e - 1; }

  void link(int a, int b) {
    if (a >= 0) twin_[a] = b;
    if (b >= 0) twin_[b] = a;
  }

  // Appends counter-clockwise triangle (i0,i1,i2); returns its first half-edge.
  int add_triangle(int i0, int i1, int i2) {
    const int t = static_cast<int>(vertex_.size());
    vertex_.insert(vertex_.end(), {i0, i1, i2});
    twin_.insert(twin_.end(), {-1, -1, -1});
    return t;
  }

  void note_hull(int e) {
    if (twin_[e] < 0) hull_edge_[vertex_[e]] = e;
  }

  // Fan over the collinear prefix order[0..k-1] with apex order[k].
  void seed_fan(const std::vector<int>& order, std::size_t k) {
    const int apex = order[k];
    const bool ccw = orient2d(pts_[order[0]], pts_[order[1]], pts_[apex]) > 0;
    int prev_spoke = -1;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      const int a = order[i], b = order[i + 1];
      if (ccw) {
        // (a,b,apex): edges a->b, b->apex, apex->a
        const int e = add_triangle(a, b, apex);
        link(e + 2, prev_spoke);
        prev_spoke = e + 1;
      } else {
        // (b,a,apex): edges b->a, a->apex, apex->b
        const int e = add_triangle(b, a, apex);
        link(e + 1, prev_spoke);
        prev_spoke = e + 2;
      }
    }
    // Hull in counter-clockwise order.
    std::vector<int> ring;
    if (ccw) {
      for (std::size_t i = 0; i < k; ++i) ring.push_back(order[i]);
      ring.push_back(apex);
    } else {
      ring.push_back(order[0]);
      ring.push_back(apex);
      for (std::size_t i = k - 1; i >= 1; --i) ring.push_back(order[i]);
    }
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const int a = ring[i], b = ring[(i + 1) % ring.size()];
      hull_next_[a] = b;
      hull_prev_[b] = a;
    }
    for (int e = 0; e < static_cast<int>(vertex_.size()); ++e) note_hull(e);
  }

  bool visible(int a, int p) const {
    return orient2d(pts_[a], pts_[hull_next_[a]], pts_[p]) < 0;
  }

  // p lies outside the current hull and is lexicographically greater than
  // every inserted point; `last` is the previously inserted (extreme) vertex.
  void insert(int p, int last) {
    int start = last;
    if (!visible(start, p) && !visible(hull_prev_[start], p)) {
      // Not expected for lexicographic insertion; fall back to a full scan.
      int e = hull_next_[last];
      while (e != last && !visible(e, p)) e = hull_next_[e];
      if (e == last) throw std::logic_error("delaunay: point not outside hull");
      start = e;
    }
    // Chain of visible edges (x, hull_next_[x]) from s to t.
    int s = visible(start, p) ? start : hull_prev_[start];
    while (visible(hull_prev_[s], p)) s = hull_prev_[s];
    std::vector<int> chain;
    for (int x = s; visible(x, p); x = hull_next_[x]) chain.push_back(x);
    const int t = hull_next_[chain.back()];

    int prev_spoke = -1;  // half-edge p->x_i of the previous new triangle
    int first_tri = -1, last_tri = -1;
    std::vector<int> to_legalize;
    for (int x : chain) {
      const int y = hull_next_[x];
      const int hull_e = hull_edge_[x];
      // (y, x, p): edges y->x, x->p, p->y
      const int e = add_triangle(y, x, p);
      link(e, hull_e);
      link(e + 1, prev_spoke);
      prev_spoke = e + 2;
      if (first_tri < 0) first_tri = e;
      last_tri = e;
      to_legalize.push_back(e);
    }
    for (std::size_t i = 1; i < chain.size(); ++i) hull_next_[chain[i]] = -1;
    hull_next_[s] = p;
    hull_prev_[p] = s;
    hull_next_[p] = t;
    hull_prev_[t] = p;
    hull_edge_[s] = first_tri + 1;
    hull_edge_[p] = last_tri + 2;

    for (int e : to_legalize) legalize(e);
  }

  // Lawson flips until every edge reachable from `start` is locally Delaunay.
  void legalize(int start) {
    std::vector<int> stack{start};
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      const int b = twin_[a];
      if (b < 0) continue;

      const int al = next(a), ar = prev(a);
      const int bl = prev(b), br = next(b);
      const int p0 = vertex_[ar];  // opposite a
      const int pr = vertex_[a];
      const int pl = vertex_[al];
      const int p1 = vertex_[bl];  // opposite b
      if (incircle_sign(pts_[pr], pts_[pl], pts_[p0], pts_[p1]) <= 0) continue;

      // Flip a/b: triangles become (p0,pr,p1) via a and (p1,pl,p0) via b.
      vertex_[a] = p1;
      vertex_[b] = p0;
      const int hbl = twin_[bl], har = twin_[ar];
      link(a, hbl);
      link(b, har);
      link(ar, bl);
      for (int e : {a, b, al, ar, bl, br}) note_hull(e);
      stack.push_back(a);
      stack.push_back(br);
    }
  }

  std::span<const IntPoint> pts_;
  std::vector<int> vertex_;
  std::vector<int> twin_;
  std::vector<int> hull_next_, hull_prev_, hull_edge_;
};

}  // namespace

std::vector<std::array<int, 3>> delaunay_triangulate(std::span<const IntPoint> points) {
  for (const auto& p : points)
    if (p.x <= -kCoordLimit || p.x >= kCoordLimit || p.y <= -kCoordLimit || p.y >= kCoordLimit)
      throw std::out_of_range("delaunay: coordinate magnitude must be below 2^28");
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return points[a].x != points[b].x ? points[a].x < points[b].x : points[a].y < points[b].y;
  });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (points[order[i]] == points[order[i - 1]])
      throw std::invalid_argument("delaunay: duplicate points");
  return SweepTriangulator(points).run(order);
}

}  // namespace fusegrow
