#pragma once

// Single-threaded reference versions of the OpenMP kernels. They share the
// per-pixel arithmetic with the parallel versions and differ only in
// traversal, so outputs must match bit for bit. Used by tests and the bench.

#include "fusegrow/eval.hpp"
#include "fusegrow/image.hpp"
#include "fusegrow/postproc.hpp"
#include "fusegrow/prior.hpp"

namespace fusegrow::reference {

/// Triangle-major rasterization: triangles in index order, first writer wins.
PriorMap interpolate_prior(const SeedTriangulation& tri, int width, int height);

DisparityMap fill_gaps(const DisparityMap& map, const GapFillParams& params = {});

Mask nonoccluded_mask(const DisparityMap& gt_left, const DisparityMap& gt_right);

EvaluationReport evaluate(const DisparityMap& est, const DisparityMap& gt, const Mask& mask);

}  // namespace fusegrow::reference
