#include "fusegrow/postproc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "fusegrow/image_io.hpp"

namespace fusegrow {

namespace detail {

std::optional<float> gap_fill_value(const DisparityMap& map, int u, int v,
                                    const GapFillParams& params, std::vector<float>& scratch) {
  const int r = params.window / 2;
  scratch.clear();
  for (int y = std::max(0, v - r); y <= std::min(map.height() - 1, v + r); ++y)
    for (int x = std::max(0, u - r); x <= std::min(map.width() - 1, u + r); ++x)
      if (map.valid(x, y)) scratch.push_back(map.value(x, y));
  if (static_cast<int>(scratch.size()) < params.min_support || scratch.empty()) return std::nullopt;
  const auto mid = scratch.begin() + static_cast<std::ptrdiff_t>((scratch.size() - 1) / 2);
  std::nth_element(scratch.begin(), mid, scratch.end());
  return *mid;
}

}  // namespace detail

DisparityMap fill_gaps(const DisparityMap& map, const GapFillParams& params) {
  if (params.window < 1 || params.window % 2 == 0)
    throw std::invalid_argument("gap-fill window must be odd");
  DisparityMap out = map;
#pragma omp parallel
  {
    std::vector<float> scratch;
#pragma omp for schedule(static)
    for (int v = 0; v < map.height(); ++v)
      for (int u = 0; u < map.width(); ++u)
        if (!map.valid(u, v))
          if (const auto value = detail::gap_fill_value(map, u, v, params, scratch))
            out.set(u, v, *value);
  }
  return out;
}

Rgb jet(double t) {
  t = std::clamp(t, 0.0, 1.0);
  auto channel = [](double x) {
    return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(1.5 - std::abs(x), 0.0, 1.0)));
  };
  return {channel(4.0 * t - 3.0), channel(4.0 * t - 2.0), channel(4.0 * t - 1.0)};
}

ColorImage colorize(const DisparityMap& map, const ColorizeOptions& options) {
  float lo = std::numeric_limits<float>::infinity();
  float hi = -std::numeric_limits<float>::infinity();
  for (int v = 0; v < map.height(); ++v)
    for (int u = 0; u < map.width(); ++u)
      if (map.valid(u, v)) {
        lo = std::min(lo, map.value(u, v));
        hi = std::max(hi, map.value(u, v));
      }
  if (options.min_disparity) lo = *options.min_disparity;
  if (options.max_disparity) hi = *options.max_disparity;

  ColorImage img(map.width(), map.height(), kUnmatchedColor);
  const double range = static_cast<double>(hi) - static_cast<double>(lo);
  for (int v = 0; v < map.height(); ++v) {
    for (int u = 0; u < map.width(); ++u) {
      if (!map.valid(u, v)) continue;
      // Near (large disparity) maps to the blue end, far to the red end.
      double t = range > 0.0 ? (static_cast<double>(hi) - map.value(u, v)) / range : 0.5;
      if (options.invert) t = 1.0 - t;
      img(u, v) = jet(t);
    }
  }
  return img;
}

StereoCamera camera_from_rig(const CalibrationRig& rig) {
  const auto& pl = rig.p_left;
  const auto& pr = rig.p_right;
  StereoCamera cam;
  const double norm = std::sqrt(pl[2][0] * pl[2][0] + pl[2][1] * pl[2][1] + pl[2][2] * pl[2][2]);
  if (norm == 0.0) throw std::invalid_argument("degenerate left projection");
  // P = K[R|t] scaled so the third row's rotation part is a unit vector.
  auto dot3 = [&](const auto& a, const auto& b) {
    return (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) / (norm * norm);
  };
  cam.cx = dot3(pl[0], pl[2]);
  cam.cy = dot3(pl[1], pl[2]);
  cam.focal = std::sqrt(std::max(0.0, dot3(pl[0], pl[0]) - cam.cx * cam.cx));
  if (!(cam.focal > 0.0)) throw std::invalid_argument("degenerate left projection");
  // Fourth columns differ by -f*b in the first row for a rectified pair.
  cam.baseline = (pl[0][3] - pr[0][3]) / norm / cam.focal;
  return cam;
}

std::string format_ply(const DisparityMap& map, const StereoCamera& camera, PlyStats* stats) {
  if (!(camera.focal > 0.0) || !(camera.baseline > 0.0))
    throw std::invalid_argument("PLY export needs focal > 0 and baseline > 0");
  const int w = map.width(), h = map.height();
  Grid<int> index(w, h, -1);
  std::ostringstream verts;
  verts.precision(9);
  int count = 0;
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const auto d = map.at(u, v);
      if (!d || !(*d > 0.0f)) continue;
      const double z = camera.focal * camera.baseline / *d;
      verts << (u - camera.cx) * z / camera.focal << ' ' << (v - camera.cy) * z / camera.focal << ' '
            << z << '\n';
      index(u, v) = count++;
    }
  }
  std::ostringstream faces;
  std::size_t face_count = 0;
  auto emit = [&](int ax, int ay, int bx, int by, int cx, int cy) {
    const int ia = index(ax, ay), ib = index(bx, by), ic = index(cx, cy);
    if (ia < 0 || ib < 0 || ic < 0) return;
    const float da = map.value(ax, ay), db = map.value(bx, by), dc = map.value(cx, cy);
    if (std::max({da, db, dc}) - std::min({da, db, dc}) > 1.0f) return;
    faces << "3 " << ia << ' ' << ib << ' ' << ic << '\n';
    ++face_count;
  };
  for (int v = 0; v + 1 < h; ++v) {
    for (int u = 0; u + 1 < w; ++u) {
      emit(u, v, u, v + 1, u + 1, v);
      emit(u + 1, v, u, v + 1, u + 1, v + 1);
    }
  }
  std::ostringstream out;
  out << "ply\nformat ascii 1.0\nelement vertex " << count
      << "\nproperty float x\nproperty float y\nproperty float z\nelement face " << face_count
      << "\nproperty list uchar int vertex_indices\nend_header\n"
      << verts.str() << faces.str();
  if (stats) *stats = {static_cast<std::size_t>(count), face_count};
  return out.str();
}

PlyStats export_ply(const DisparityMap& map, const StereoCamera& camera,
                    const std::filesystem::path& path) {
  PlyStats stats;
  write_file_bytes(path, format_ply(map, camera, &stats));
  return stats;
}

}  // namespace fusegrow
