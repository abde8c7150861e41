#pragma once

#include <array>
#include <compare>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fusegrow/image.hpp"

namespace fusegrow {

/// Correspondence (u,v) in the left image <-> (u_prime,v) in the right image.
/// Ordered lexicographically by (v, u, u_prime).
struct SeedCorrespondence {
  int u = 0;
  int u_prime = 0;
  int v = 0;

  int disparity() const { return u - u_prime; }

  friend auto operator<=>(const SeedCorrespondence& a, const SeedCorrespondence& b) {
    if (auto c = a.v <=> b.v; c != 0) return c;
    if (auto c = a.u <=> b.u; c != 0) return c;
    return a.u_prime <=> b.u_prime;
  }
  friend bool operator==(const SeedCorrespondence&, const SeedCorrespondence&) = default;
};

using SeedList = std::vector<SeedCorrespondence>;

/// Sorts into canonical (v,u,u') order and drops exact duplicates.
void canonicalize(SeedList& seeds);

/// Inside both images of the given size with non-negative disparity.
bool seed_in_bounds(const SeedCorrespondence& s, int width, int height);

/// Low-resolution range frame. Depth in metres; invalid pixels are masked out
/// of the DisparityMap container, which is reused here as a float grid.
struct TofFrame {
  DisparityMap depth;
  std::optional<GrayImage> intensity;
};

using Mat34 = std::array<std::array<double, 4>, 3>;
using Mat44 = std::array<std::array<double, 4>, 4>;

struct TofIntrinsics {
  double fx = 0.0, fy = 0.0, cx = 0.0, cy = 0.0;
};

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CalibrationRig {
  Mat34 p_left{};
  Mat34 p_right{};
  TofIntrinsics tof;
  Mat44 tof_to_world{};

  /// Throws CalibrationError on rank-deficient projections or fx/fy <= 0.
  void validate() const;
};

/// Whitespace-separated: 12 numbers P_left (row-major), 12 P_right, 4 numbers
/// fx fy cx cy, 16 numbers T (row-major). '#' starts a comment. Malformed
/// input raises CalibrationError naming the line and field.
CalibrationRig parse_calibration(const std::string& text);
CalibrationRig load_calibration(const std::filesystem::path& path);
std::string format_calibration(const CalibrationRig& rig);

/// Projects every valid TOF pixel into both rectified images.
SeedList project_tof_seeds(const TofFrame& tof, const CalibrationRig& calib, int image_width,
                           int image_height);
SeedList project_tof_seeds(const TofFrame& tof, const CalibrationRig& calib,
                           const GrayImage& left, const GrayImage& right);

/// Samples ground truth on a regular grid (u, v multiples of step) without
/// added noise. step must be >= 1.
SeedList simulate_tof_seeds(const DisparityMap& gt, int step);

struct RefineParams {
  int window = 5;               // occupancy and darkness neighbourhood side
  double dark_threshold = 0.04; // mean luminance below this is "very dark"
  int depth_gap = 2;            // disparity gap that marks a background seed
};

struct RefineReport {
  std::size_t input = 0;
  std::size_t dropped_dark = 0;
  std::size_t dropped_occluded = 0;
};

/// Drops seeds in dark regions, then background seeds that share a
/// neighbourhood (in either image) with a retained seed whose disparity is
/// larger by more than depth_gap. Seeds are visited by decreasing disparity,
/// ties in (v,u,u') order, so the retained witness always exists. Output is
/// canonical and a subset of the input.
SeedList refine_seeds(const SeedList& seeds, const GrayImage& left, const GrayImage& right,
                      const RefineParams& params = {}, RefineReport* report = nullptr);

/// Mean luminance of the n*n neighbourhood, clipped to the image.
double neighbourhood_mean(const GrayImage& img, int u, int v, int n);

/// CSV with header "u,u_prime,v".
void write_seeds_csv(std::ostream& out, const SeedList& seeds);
void save_seeds_csv(const SeedList& seeds, const std::filesystem::path& path);
SeedList read_seeds_csv(std::istream& in);
SeedList load_seeds_csv(const std::filesystem::path& path);

}  // namespace fusegrow
