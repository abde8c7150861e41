#include "fusegrow/prior.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "fusegrow/delaunay.hpp"

namespace fusegrow {

std::optional<SeedTriangulation> triangulate_seeds(const SeedList& seeds) {
  std::map<std::pair<int, int>, int> best;  // (v,u) -> disparity
  for (const auto& s : seeds) {
    auto [it, inserted] = best.try_emplace({s.v, s.u}, s.disparity());
    if (!inserted) it->second = std::max(it->second, s.disparity());
  }
  SeedTriangulation tri;
  std::vector<IntPoint> points;
  tri.vertices.reserve(best.size());
  points.reserve(best.size());
  for (const auto& [pos, d] : best) {
    tri.vertices.push_back({pos.second, pos.first, static_cast<double>(d)});
    points.push_back({pos.second, pos.first});
  }
  tri.triangles = delaunay_triangulate(points);
  if (tri.triangles.empty()) return std::nullopt;
  return tri;
}

namespace detail {

std::optional<float> sample_triangle(const SeedTriangulation& tri, int t, int u, int v) {
  const auto& [ia, ib, ic] = tri.triangles[t];
  const auto& a = tri.vertices[ia];
  const auto& b = tri.vertices[ib];
  const auto& c = tri.vertices[ic];
  const IntPoint pa{a.u, a.v}, pb{b.u, b.v}, pc{c.u, c.v}, p{u, v};
  const std::int64_t w_a = orient2d(pb, pc, p);
  const std::int64_t w_b = orient2d(pc, pa, p);
  const std::int64_t w_c = orient2d(pa, pb, p);
  if (w_a < 0 || w_b < 0 || w_c < 0) return std::nullopt;
  const double area = static_cast<double>(w_a + w_b + w_c);
  const double value = (static_cast<double>(w_a) * a.d + static_cast<double>(w_b) * b.d +
                        static_cast<double>(w_c) * c.d) /
                       area;
  const double lo = std::min({a.d, b.d, c.d}), hi = std::max({a.d, b.d, c.d});
  return static_cast<float>(std::clamp(value, lo, hi));
}

}  // namespace detail

PriorMap interpolate_prior(const SeedTriangulation& tri, int width, int height) {
  PriorMap prior(width, height);
  if (width <= 0 || height <= 0) return prior;

  // Triangles touching each row, in index order.
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(height));
  for (int t = 0; t < static_cast<int>(tri.triangles.size()); ++t) {
    int lo = height, hi = -1;
    for (int k : tri.triangles[t]) {
      lo = std::min(lo, tri.vertices[k].v);
      hi = std::max(hi, tri.vertices[k].v);
    }
    for (int v = std::max(0, lo); v <= std::min(height - 1, hi); ++v) rows[v].push_back(t);
  }

#pragma omp parallel for schedule(dynamic, 8)
  for (int v = 0; v < height; ++v) {
    for (int t : rows[v]) {
      int lo = width, hi = -1;
      for (int k : tri.triangles[t]) {
        lo = std::min(lo, tri.vertices[k].u);
        hi = std::max(hi, tri.vertices[k].u);
      }
      for (int u = std::max(0, lo); u <= std::min(width - 1, hi); ++u) {
        if (prior.valid(u, v)) continue;
        if (const auto value = detail::sample_triangle(tri, t, u, v)) prior.set(u, v, *value);
      }
    }
  }
  return prior;
}

PriorMap build_prior(const SeedList& seeds, int width, int height) {
  std::vector<SeedCorrespondence> inside;
  for (const auto& s : seeds)
    if (s.u >= 0 && s.u < width && s.v >= 0 && s.v < height) inside.push_back(s);
  const auto tri = triangulate_seeds(inside);
  if (!tri) return PriorMap(width, height);
  return interpolate_prior(*tri, width, height);
}

std::string format_triangulation_obj(const SeedTriangulation& tri) {
  std::ostringstream out;
  for (const auto& p : tri.vertices) out << "v " << p.u << ' ' << p.v << ' ' << p.d << '\n';
  for (const auto& t : tri.triangles)
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  return out.str();
}

void save_triangulation_obj(const SeedTriangulation& tri, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << format_triangulation_obj(tri);
}

}  // namespace fusegrow
