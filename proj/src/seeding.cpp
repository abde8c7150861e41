#include "fusegrow/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace fusegrow {

void canonicalize(SeedList& seeds) {
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
}

bool seed_in_bounds(const SeedCorrespondence& s, int width, int height) {
  return s.u >= 0 && s.u < width && s.u_prime >= 0 && s.u_prime < width && s.v >= 0 &&
         s.v < height && s.disparity() >= 0;
}

// --- calibration -----------------------------------------------------------

namespace {

int row_rank(const Mat34& p) {
  std::array<std::array<double, 4>, 3> a = p;
  double scale = 0.0;
  for (const auto& r : a)
    for (double x : r) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0;
  const double tol = scale * 1e-12;
  int rank = 0;
  for (int col = 0; col < 4 && rank < 3; ++col) {
    int pivot = rank;
    for (int r = rank + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) <= tol) continue;
    std::swap(a[pivot], a[rank]);
    for (int r = rank + 1; r < 3; ++r) {
      const double f = a[r][col] / a[rank][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[rank][c];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

void CalibrationRig::validate() const {
  if (row_rank(p_left) < 3) throw CalibrationError("P_left is rank deficient");
  if (row_rank(p_right) < 3) throw CalibrationError("P_right is rank deficient");
  if (!(tof.fx > 0.0) || !(tof.fy > 0.0)) throw CalibrationError("TOF focal lengths must be positive");
}

CalibrationRig parse_calibration(const std::string& text) {
  static constexpr const char* kGroups[] = {"P_left", "P_right", "tof_intrinsics", "T_tof_to_world"};
  static constexpr int kSizes[] = {12, 12, 4, 16};
  std::vector<double> values;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string token;
    while (fields >> token) {
      const std::size_t index = values.size();
      int group = 0, offset = static_cast<int>(index);
      while (group < 4 && offset >= kSizes[group]) offset -= kSizes[group++];
      if (group == 4)
        throw CalibrationError("line " + std::to_string(line_no) + ": unexpected extra field '" +
                               token + "' (expected 44 numbers)");
      char* end = nullptr;
      const double x = std::strtod(token.c_str(), &end);
      if (end != token.c_str() + token.size() || !std::isfinite(x))
        throw CalibrationError("line " + std::to_string(line_no) + ": field " +
                               std::to_string(offset + 1) + " of " + kGroups[group] +
                               " is not a number: '" + token + "'");
      values.push_back(x);
    }
  }
  if (values.size() != 44) {
    std::size_t seen = values.size();
    int group = 0;
    while (group < 4 && seen >= static_cast<std::size_t>(kSizes[group])) seen -= kSizes[group++];
    throw CalibrationError("line " + std::to_string(line_no) + ": expected 44 numbers, found " +
                           std::to_string(values.size()) + " (" + kGroups[group] + " has " +
                           std::to_string(seen) + " of " + std::to_string(kSizes[group]) + ")");
  }
  CalibrationRig rig;
  std::size_t k = 0;
  for (auto& r : rig.p_left)
    for (double& x : r) x = values[k++];
  for (auto& r : rig.p_right)
    for (double& x : r) x = values[k++];
  rig.tof.fx = values[k++];
  rig.tof.fy = values[k++];
  rig.tof.cx = values[k++];
  rig.tof.cy = values[k++];
  for (auto& r : rig.tof_to_world)
    for (double& x : r) x = values[k++];
  rig.validate();
  return rig;
}

CalibrationRig load_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CalibrationError("cannot open calibration file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_calibration(ss.str());
}

std::string format_calibration(const CalibrationRig& rig) {
  std::ostringstream out;
  out.precision(17);
  auto rows = [&](const auto& m) {
    for (const auto& r : m) {
      for (std::size_t c = 0; c < r.size(); ++c) out << (c ? " " : "") << r[c];
      out << '\n';
    }
  };
  out << "# P_left\n";
  rows(rig.p_left);
  out << "# P_right\n";
  rows(rig.p_right);
  out << "# fx fy cx cy\n" << rig.tof.fx << ' ' << rig.tof.fy << ' ' << rig.tof.cx << ' '
      << rig.tof.cy << '\n';
  out << "# T_tof_to_world\n";
  rows(rig.tof_to_world);
  return out.str();
}

// --- projection ------------------------------------------------------------

SeedList project_tof_seeds(const TofFrame& tof, const CalibrationRig& calib, int image_width,
                           int image_height) {
  SeedList seeds;
  const auto& T = calib.tof_to_world;
  for (int j = 0; j < tof.depth.height(); ++j) {
    for (int i = 0; i < tof.depth.width(); ++i) {
      const auto z = tof.depth.at(i, j);
      if (!z || !(*z > 0.0f)) continue;
      const double x_tof[4] = {(i - calib.tof.cx) * *z / calib.tof.fx,
                               (j - calib.tof.cy) * *z / calib.tof.fy, static_cast<double>(*z), 1.0};
      double world[4];
      for (int r = 0; r < 4; ++r)
        world[r] = T[r][0] * x_tof[0] + T[r][1] * x_tof[1] + T[r][2] * x_tof[2] + T[r][3] * x_tof[3];

      auto project = [&](const Mat34& P, double& u, double& v) {
        double h[3];
        for (int r = 0; r < 3; ++r)
          h[r] = P[r][0] * world[0] + P[r][1] * world[1] + P[r][2] * world[2] + P[r][3] * world[3];
        if (!(h[2] > 0.0)) return false;
        u = h[0] / h[2];
        v = h[1] / h[2];
        return std::isfinite(u) && std::isfinite(v);
      };
      double ul, vl, ur, vr;
      if (!project(calib.p_left, ul, vl) || !project(calib.p_right, ur, vr)) continue;
      if (std::abs(vl - vr) > 1.0) continue;
      const SeedCorrespondence s{static_cast<int>(std::lround(ul)),
                                 static_cast<int>(std::lround(ur)),
                                 static_cast<int>(std::lround(vl))};
      // Right row must land inside the right image too.
      if (std::lround(vr) < 0 || std::lround(vr) >= image_height) continue;
      if (!seed_in_bounds(s, image_width, image_height)) continue;
      seeds.push_back(s);
    }
  }
  canonicalize(seeds);
  return seeds;
}

SeedList project_tof_seeds(const TofFrame& tof, const CalibrationRig& calib,
                           const GrayImage& left, const GrayImage& right) {
  if (left.width() != right.width() || left.height() != right.height())
    throw std::invalid_argument("rectified images must have equal size");
  return project_tof_seeds(tof, calib, left.width(), left.height());
}

// --- simulation ------------------------------------------------------------

SeedList simulate_tof_seeds(const DisparityMap& gt, int step) {
  if (step < 1) throw std::invalid_argument("step must be >= 1");
  SeedList seeds;
  for (int v = 0; v < gt.height(); v += step) {
    for (int u = 0; u < gt.width(); u += step) {
      const auto d = gt.at(u, v);
      if (!d) continue;
      const SeedCorrespondence s{u, u - static_cast<int>(std::lround(*d)), v};
      if (seed_in_bounds(s, gt.width(), gt.height())) seeds.push_back(s);
    }
  }
  return seeds;  // row-major grid walk is already canonical
}

// --- refinement ------------------------------------------------------------

double neighbourhood_mean(const GrayImage& img, int u, int v, int n) {
  const int r = n / 2;
  const int u0 = std::max(0, u - r), u1 = std::min(img.width() - 1, u + r);
  const int v0 = std::max(0, v - r), v1 = std::min(img.height() - 1, v + r);
  double sum = 0.0;
  int count = 0;
  for (int y = v0; y <= v1; ++y)
    for (int x = u0; x <= u1; ++x, ++count) sum += img(x, y);
  return count ? sum / count : 0.0;
}

SeedList refine_seeds(const SeedList& seeds, const GrayImage& left, const GrayImage& right,
                      const RefineParams& params, RefineReport* report) {
  if (left.width() != right.width() || left.height() != right.height())
    throw std::invalid_argument("rectified images must have equal size");
  const int width = left.width(), height = left.height();

  SeedList candidates;
  candidates.reserve(seeds.size());
  for (const auto& s : seeds)
    if (seed_in_bounds(s, width, height)) candidates.push_back(s);
  canonicalize(candidates);

  // Pass 1: dark filter.
  std::vector<std::uint8_t> bright(candidates.size(), 0);
  const long count = static_cast<long>(candidates.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    const auto& s = candidates[i];
    bright[i] = neighbourhood_mean(left, s.u, s.v, params.window) >= params.dark_threshold &&
                neighbourhood_mean(right, s.u_prime, s.v, params.window) >= params.dark_threshold;
  }
  SeedList lit;
  lit.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (bright[i]) lit.push_back(candidates[i]);
  const std::size_t dropped_dark = candidates.size() - lit.size();

  // Pass 2: occupancy. Foreground first; a seed survives unless an already
  // retained seed within the neighbourhood is closer by more than depth_gap.
  std::vector<std::size_t> order(lit.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lit[a].disparity() > lit[b].disparity();
  });
  Grid<int> kept_left(width, height, -1), kept_right(width, height, -1);
  const int r = params.window / 2;
  auto max_near = [&](const Grid<int>& grid, int u, int v) {
    int best = -1;
    for (int y = std::max(0, v - r); y <= std::min(height - 1, v + r); ++y)
      for (int x = std::max(0, u - r); x <= std::min(width - 1, u + r); ++x)
        best = std::max(best, grid(x, y));
    return best;
  };
  std::vector<std::uint8_t> keep(lit.size(), 0);
  for (std::size_t idx : order) {
    const auto& s = lit[idx];
    const int d = s.disparity();
    const int closest = std::max(max_near(kept_left, s.u, s.v), max_near(kept_right, s.u_prime, s.v));
    if (closest >= 0 && closest > d + params.depth_gap) continue;
    keep[idx] = 1;
    kept_left(s.u, s.v) = std::max(kept_left(s.u, s.v), d);
    kept_right(s.u_prime, s.v) = std::max(kept_right(s.u_prime, s.v), d);
  }
  SeedList out;
  for (std::size_t i = 0; i < lit.size(); ++i)
    if (keep[i]) out.push_back(lit[i]);

  if (report) {
    report->input = seeds.size();
    report->dropped_dark = dropped_dark;
    report->dropped_occluded = lit.size() - out.size();
  }
  return out;
}

// --- CSV -------------------------------------------------------------------

void write_seeds_csv(std::ostream& out, const SeedList& seeds) {
  out << "u,u_prime,v\n";
  for (const auto& s : seeds) out << s.u << ',' << s.u_prime << ',' << s.v << '\n';
}

void save_seeds_csv(const SeedList& seeds, const std::filesystem::path& path) {
  SeedList sorted = seeds;
  canonicalize(sorted);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_seeds_csv(out, sorted);
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

SeedList read_seeds_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("seeds CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "u,u_prime,v") throw std::runtime_error("seeds CSV: expected header 'u,u_prime,v'");
  SeedList seeds;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    SeedCorrespondence s;
    char c1 = 0, c2 = 0;
    std::istringstream fields(line);
    if (!(fields >> s.u >> c1 >> s.u_prime >> c2 >> s.v) || c1 != ',' || c2 != ',' ||
        (fields >> std::ws, !fields.eof()))
      throw std::runtime_error("seeds CSV line " + std::to_string(line_no) + ": malformed row '" +
                               line + "'");
    seeds.push_back(s);
  }
  return seeds;
}

SeedList load_seeds_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open seeds file '" + path.string() + "'");
  return read_seeds_csv(in);
}

}  // namespace fusegrow
