#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fusegrow/delaunay.hpp"

using namespace fusegrow;

namespace {

using Tri = std::array<int, 3>;

// Floating-point circumcircle test, independent of the exact predicate.
bool strictly_inside_circumcircle(const IntPoint& a, const IntPoint& b, const IntPoint& c,
                                  const IntPoint& p, double tol) {
  const double ax = a.x, ay = a.y, bx = b.x, by = b.y, cx = c.x, cy = c.y;
  const double d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  const double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  const double ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
  const double uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
  const double r2 = (ax - ux) * (ax - ux) + (ay - uy) * (ay - uy);
  const double q2 = (p.x - ux) * (p.x - ux) + (p.y - uy) * (p.y - uy);
  return q2 < r2 * (1.0 - tol);
}

double area2(const std::vector<IntPoint>& p, const Tri& t) {
  return static_cast<double>(orient2d(p[t[0]], p[t[1]], p[t[2]]));
}

double hull_area2(std::vector<IntPoint> p) {
  // Andrew's monotone chain, then shoelace.
  std::sort(p.begin(), p.end(), [](auto& a, auto& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  std::vector<IntPoint> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && orient2d(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && orient2d(h[k - 2], h[k - 1], p[i - 1]) <= 0) --k;
    h[k++] = p[i - 1];
  }
  h.resize(k - 1);
  double s = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& a = h[i];
    const auto& b = h[(i + 1) % h.size()];
    s += static_cast<double>(a.x) * b.y - static_cast<double>(b.x) * a.y;
  }
  return s;
}

void check_delaunay(const std::vector<IntPoint>& pts, const std::vector<Tri>& tris) {
  double total = 0;
  std::set<std::pair<int, int>> directed;
  for (const auto& t : tris) {
    for (int i : t) ASSERT_TRUE(i >= 0 && i < static_cast<int>(pts.size()));
    const double a = area2(pts, t);
    ASSERT_GT(a, 0) << "triangle not counter-clockwise";
    total += a;
    for (int e = 0; e < 3; ++e)
      ASSERT_TRUE(directed.insert({t[e], t[(e + 1) % 3]}).second) << "edge used twice";
    for (std::size_t p = 0; p < pts.size(); ++p) {
      if (static_cast<int>(p) == t[0] || static_cast<int>(p) == t[1] || static_cast<int>(p) == t[2])
        continue;
      EXPECT_FALSE(strictly_inside_circumcircle(pts[t[0]], pts[t[1]], pts[t[2]], pts[p], 1e-9))
          << "point " << p << " inside circumcircle";
    }
  }
  EXPECT_DOUBLE_EQ(total, hull_area2(pts));
}

std::vector<IntPoint> random_points(std::mt19937& rng, int n, int range) {
  std::uniform_int_distribution<int> d(0, range);
  std::set<std::pair<int, int>> seen;
  std::vector<IntPoint> p;
  while (static_cast<int>(p.size()) < n) {
    const int x = d(rng), y = d(rng);
    if (seen.insert({x, y}).second) p.push_back({x, y});
  }
  return p;
}

}  // namespace

TEST(Predicates, Orientation) {
  EXPECT_GT(orient2d({0, 0}, {1, 0}, {0, 1}), 0);
  EXPECT_LT(orient2d({0, 0}, {0, 1}, {1, 0}), 0);
  EXPECT_EQ(orient2d({0, 0}, {2, 2}, {5, 5}), 0);
  // big*(big-2) - (big-1)^2 = -1 must survive without rounding.
  const std::int64_t big = (1 << 28) - 1;
  EXPECT_EQ(orient2d({0, 0}, {big, big - 1}, {big - 1, big - 2}), -1);
}

TEST(Predicates, InCircle) {
  const IntPoint a{0, 0}, b{2, 0}, c{0, 2};
  EXPECT_GT(incircle_sign(a, b, c, {1, 1}), 0);
  EXPECT_EQ(incircle_sign(a, b, c, {2, 2}), 0);
  EXPECT_LT(incircle_sign(a, b, c, {3, 3}), 0);
}

TEST(Delaunay, ThreePointsOneTriangle) {
  const std::vector<IntPoint> p{{0, 0}, {4, 1}, {1, 3}};
  const auto t = delaunay_triangulate(p);
  ASSERT_EQ(t.size(), 1u);
  check_delaunay(p, t);
}

TEST(Delaunay, UnitSquareTwoTriangles) {
  const std::vector<IntPoint> p{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto t = delaunay_triangulate(p);
  ASSERT_EQ(t.size(), 2u);
  check_delaunay(p, t);
  // Deterministic for a cocircular configuration.
  EXPECT_EQ(t, delaunay_triangulate(p));
}

TEST(Delaunay, DegenerateInputs) {
  EXPECT_TRUE(delaunay_triangulate(std::vector<IntPoint>{}).empty());
  EXPECT_TRUE(delaunay_triangulate(std::vector<IntPoint>{{0, 0}, {1, 1}}).empty());
  EXPECT_TRUE(delaunay_triangulate(std::vector<IntPoint>{{0, 0}, {1, 1}, {2, 2}, {5, 5}}).empty());
  EXPECT_THROW(delaunay_triangulate(std::vector<IntPoint>{{0, 0}, {1, 1}, {0, 0}}),
               std::invalid_argument);
  EXPECT_THROW(delaunay_triangulate(std::vector<IntPoint>{{0, 0}, {1, 1}, {1 << 29, 0}}),
               std::out_of_range);
}

TEST(Delaunay, CollinearPrefixThenOffLinePoint) {
  std::vector<IntPoint> p;
  for (int i = 0; i < 8; ++i) p.push_back({i, 0});
  p.push_back({3, 5});
  p.push_back({3, -4});
  const auto t = delaunay_triangulate(p);
  EXPECT_EQ(t.size(), 14u);  // 2n - 2 - h with n = 10, h = 4
  check_delaunay(p, t);
}

TEST(Delaunay, FiftyRandomPointsEmptyCircumcircle) {
  std::mt19937 rng(50);
  const auto p = random_points(rng, 50, 1000);
  check_delaunay(p, delaunay_triangulate(p));
}

TEST(Delaunay, ManyRandomSetsIncludingGrids) {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = random_points(rng, 5 + trial * 7, trial % 2 ? 30 : 5000);
    check_delaunay(p, delaunay_triangulate(p));
  }
  // Regular lattice: maximally cocircular.
  std::vector<IntPoint> grid;
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 15; ++x) grid.push_back({x * 10, y * 10});
  const auto t = delaunay_triangulate(grid);
  EXPECT_EQ(t.size(), static_cast<std::size_t>(2 * 11 * 14));
  check_delaunay(grid, t);
}

TEST(Delaunay, IndependentOfInputOrder) {
  std::mt19937 rng(3);
  auto p = random_points(rng, 200, 400);
  const auto t1 = delaunay_triangulate(p);
  std::vector<int> perm(p.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<IntPoint> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[perm[i]];
  const auto t2 = delaunay_triangulate(q);
  auto canon = [](std::vector<Tri> ts, const std::vector<IntPoint>& pts) {
    std::set<std::vector<std::pair<std::int64_t, std::int64_t>>> out;
    for (auto& t : ts) {
      std::vector<std::pair<std::int64_t, std::int64_t>> v;
      for (int i : t) v.push_back({pts[i].x, pts[i].y});
      std::sort(v.begin(), v.end());
      out.insert(v);
    }
    return out;
  };
  EXPECT_EQ(canon(t1, p), canon(t2, q));
}
