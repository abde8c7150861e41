#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fusegrow/image.hpp"
#include "fusegrow/seeding.hpp"

namespace fusegrow {

struct GapFillParams {
  int window = 5;
  int min_support = 13;
};

/// One pass of median filling: an invalid pixel with at least min_support
/// valid pixels in its window (read from the input only) receives their lower
/// median. Valid pixels are never modified. Parallel over rows.
DisparityMap fill_gaps(const DisparityMap& map, const GapFillParams& params = {});

/// Dark blue used for unmatched pixels.
inline constexpr Rgb kUnmatchedColor{0, 0, 96};

struct ColorizeOptions {
  std::optional<float> min_disparity;  // defaults to the map minimum
  std::optional<float> max_disparity;  // defaults to the map maximum
  bool invert = false;                 // false: nearer (larger disparity) -> colder
};

/// Jet ramp sample at t in [0,1] (t=0 blue end, t=1 red end).
Rgb jet(double t);

/// Linear map of valid disparities onto the jet ramp. A degenerate range maps
/// everything to the middle of the ramp.
ColorImage colorize(const DisparityMap& map, const ColorizeOptions& options = {});

/// Pinhole parameters for reprojection: z = focal * baseline / d.
struct StereoCamera {
  double focal = 0.0;
  double baseline = 0.0;
  double cx = 0.0;
  double cy = 0.0;
};

/// Focal length, principal point and baseline of a rectified rig, assuming
/// P_left = K[I|0] and P_right = K[I|-b e_x] up to a common rigid transform.
StereoCamera camera_from_rig(const CalibrationRig& rig);

struct PlyStats {
  std::size_t vertices = 0;
  std::size_t faces = 0;
};

/// ASCII PLY 1.0: one vertex per pixel with positive valid disparity, and
/// triangles over 2x2 pixel blocks whose vertices exist and span at most 1 px
/// of disparity. Throws std::invalid_argument unless focal and baseline > 0.
std::string format_ply(const DisparityMap& map, const StereoCamera& camera,
                       PlyStats* stats = nullptr);
PlyStats export_ply(const DisparityMap& map, const StereoCamera& camera,
                    const std::filesystem::path& path);

namespace detail {

/// Lower median of the valid window samples around (u,v), or nullopt with
/// fewer than min_support of them. Shared with the serial reference.
std::optional<float> gap_fill_value(const DisparityMap& map, int u, int v,
                                    const GapFillParams& params, std::vector<float>& scratch);

}  // namespace detail

}  // namespace fusegrow
