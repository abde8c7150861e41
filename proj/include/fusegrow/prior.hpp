#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fusegrow/image.hpp"
#include "fusegrow/seeding.hpp"

namespace fusegrow {

struct SeedVertex {
  int u = 0;
  int v = 0;
  double d = 0.0;
};

/// Delaunay triangulation of seed positions in the left image.
struct SeedTriangulation {
  std::vector<SeedVertex> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise in (u, v)
};

/// Collapses seeds sharing a left pixel (larger disparity wins) and
/// triangulates. Returns std::nullopt with fewer than three distinct
/// positions or when all positions are collinear.
std::optional<SeedTriangulation> triangulate_seeds(const SeedList& seeds);

/// Barycentric interpolation of vertex disparities at every pixel centre
/// inside or on a triangle; pixels outside the hull stay invalid. On shared
/// edges the lowest-index covering triangle wins. Rows are processed in
/// parallel; output is bitwise identical to reference::interpolate_prior.
PriorMap interpolate_prior(const SeedTriangulation& tri, int width, int height);

/// triangulate_seeds + interpolate_prior; an everywhere-invalid map when the
/// seeds cannot be triangulated.
PriorMap build_prior(const SeedList& seeds, int width, int height);

/// "v u v d" lines followed by 1-based "f i j k" lines.
std::string format_triangulation_obj(const SeedTriangulation& tri);
void save_triangulation_obj(const SeedTriangulation& tri, const std::filesystem::path& path);

namespace detail {

/// Value of triangle `t` at pixel (u,v) if the pixel centre is covered.
/// Shared by the parallel and reference rasterizers.
std::optional<float> sample_triangle(const SeedTriangulation& tri, int t, int u, int v);

}  // namespace detail

}  // namespace fusegrow
