#include "fusegrow/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fusegrow::reference {

PriorMap interpolate_prior(const SeedTriangulation& tri, int width, int height) {
  PriorMap prior(width, height);
  for (int t = 0; t < static_cast<int>(tri.triangles.size()); ++t) {
    int u0 = width, u1 = -1, v0 = height, v1 = -1;
    for (int k : tri.triangles[t]) {
      u0 = std::min(u0, tri.vertices[k].u);
      u1 = std::max(u1, tri.vertices[k].u);
      v0 = std::min(v0, tri.vertices[k].v);
      v1 = std::max(v1, tri.vertices[k].v);
    }
    for (int v = std::max(0, v0); v <= std::min(height - 1, v1); ++v)
      for (int u = std::max(0, u0); u <= std::min(width - 1, u1); ++u)
        if (!prior.valid(u, v))
          if (const auto value = detail::sample_triangle(tri, t, u, v)) prior.set(u, v, *value);
  }
  return prior;
}

DisparityMap fill_gaps(const DisparityMap& map, const GapFillParams& params) {
  if (params.window < 1 || params.window % 2 == 0)
    throw std::invalid_argument("gap-fill window must be odd");
  DisparityMap out = map;
  std::vector<float> scratch;
  for (int v = 0; v < map.height(); ++v)
    for (int u = 0; u < map.width(); ++u)
      if (!map.valid(u, v))
        if (const auto value = detail::gap_fill_value(map, u, v, params, scratch))
          out.set(u, v, *value);
  return out;
}

Mask nonoccluded_mask(const DisparityMap& gt_left, const DisparityMap& gt_right) {
  if (gt_left.width() != gt_right.width() || gt_left.height() != gt_right.height())
    throw std::invalid_argument("ground-truth maps differ in size");
  Mask mask(gt_left.width(), gt_left.height(), 0);
  for (int v = 0; v < gt_left.height(); ++v) {
    for (int u = 0; u < gt_left.width(); ++u) {
      const auto d = gt_left.at(u, v);
      if (!d) continue;
      const long ur = std::lround(u - static_cast<double>(*d));
      if (ur < 0 || ur >= gt_right.width()) continue;
      const auto dr = gt_right.at(static_cast<int>(ur), v);
      if (dr && std::abs(static_cast<double>(*d) - *dr) <= kConsistencySlack) mask(u, v) = 1;
    }
  }
  return mask;
}

EvaluationReport evaluate(const DisparityMap& est, const DisparityMap& gt, const Mask& mask) {
  if (est.width() != gt.width() || est.height() != gt.height() || mask.width() != gt.width() ||
      mask.height() != gt.height())
    throw std::invalid_argument("evaluate: estimate, ground truth and mask must have equal size");
  EvaluationReport r;
  for (int v = 0; v < gt.height(); ++v) {
    for (int u = 0; u < gt.width(); ++u) {
      if (!mask(u, v) || !gt.valid(u, v)) continue;
      ++r.evaluated_pixels;
      if (!est.valid(u, v)) ++r.unmatched;
      else if (std::abs(static_cast<double>(est.value(u, v)) - gt.value(u, v)) < kCorrectThreshold)
        ++r.correct;
      else
        ++r.wrong;
    }
  }
  r.accuracy_percent =
      r.evaluated_pixels ? 100.0 * static_cast<double>(r.correct) / r.evaluated_pixels : 0.0;
  return r;
}

}  // namespace fusegrow::reference
