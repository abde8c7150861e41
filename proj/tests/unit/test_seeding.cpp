#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "fusegrow/seeding.hpp"
#include "synthetic.hpp"
#include "tempdir.hpp"

using namespace fusegrow;

namespace {

constexpr double kF = 500.0, kB = 0.1, kCx = 160.0, kCy = 120.0;

CalibrationRig identity_rig() {
  CalibrationRig rig;
  rig.p_left = {{{kF, 0, kCx, 0}, {0, kF, kCy, 0}, {0, 0, 1, 0}}};
  rig.p_right = {{{kF, 0, kCx, -kF * kB}, {0, kF, kCy, 0}, {0, 0, 1, 0}}};
  rig.tof = {50.0, 50.0, 8.0, 6.0};
  rig.tof_to_world = {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
  return rig;
}

TofFrame empty_frame(int w, int h) { return {DisparityMap(w, h), std::nullopt}; }

GrayImage flat(int w, int h, float value) { return GrayImage(w, h, value); }

}  // namespace

TEST(SeedCorrespondence, OrderingAndCanonical) {
  SeedList s{{5, 2, 1}, {1, 0, 2}, {3, 1, 1}, {5, 2, 1}, {3, 0, 1}};
  canonicalize(s);
  const SeedList expected{{3, 0, 1}, {3, 1, 1}, {5, 2, 1}, {1, 0, 2}};
  EXPECT_EQ(s, expected);
  EXPECT_EQ(expected[2].disparity(), 3);
}

TEST(SeedCorrespondence, Bounds) {
  EXPECT_TRUE(seed_in_bounds({5, 3, 2}, 10, 10));
  EXPECT_FALSE(seed_in_bounds({3, 5, 2}, 10, 10));  // negative disparity
  EXPECT_FALSE(seed_in_bounds({10, 3, 2}, 10, 10));
  EXPECT_FALSE(seed_in_bounds({5, -1, 2}, 10, 10));
  EXPECT_FALSE(seed_in_bounds({5, 3, 10}, 10, 10));
}

TEST(ProjectTof, IdentityRigOpticalAxis) {
  const auto rig = identity_rig();
  // u and u' are rounded separately, so depths giving half-pixel disparities are avoided.
  for (double z : {0.9, 1.0, 1.7, 2.5, 3.0}) {
    auto tof = empty_frame(17, 13);
    tof.depth.set(8, 6, static_cast<float>(z));
    const auto seeds = project_tof_seeds(tof, rig, 320, 240);
    ASSERT_EQ(seeds.size(), 1u);
    EXPECT_EQ(seeds[0].u, 160);
    EXPECT_EQ(seeds[0].v, 120);
    EXPECT_EQ(seeds[0].disparity(), std::lround(kF * kB / static_cast<float>(z))) << z;
  }
}

TEST(ProjectTof, InvalidDepthGivesNoSeed) {
  auto tof = empty_frame(17, 13);
  EXPECT_TRUE(project_tof_seeds(tof, identity_rig(), 320, 240).empty());
  tof.depth.set(3, 3, 0.0f);
  tof.depth.set(4, 3, -1.0f);
  EXPECT_TRUE(project_tof_seeds(tof, identity_rig(), 320, 240).empty());
}

TEST(ProjectTof, RandomRigMatchesMatrixOracle) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ang(-0.05, 0.05), tr(-0.05, 0.05);
  // Small rotation about y plus translation for the TOF-to-world transform.
  const double a = ang(rng);
  auto rig = identity_rig();
  rig.tof = {60.0, 61.0, 9.0, 7.0};
  rig.tof_to_world = {{{std::cos(a), 0, std::sin(a), tr(rng)},
                       {0, 1, 0, tr(rng)},
                       {-std::sin(a), 0, std::cos(a), tr(rng)},
                       {0, 0, 0, 1}}};
  auto tof = empty_frame(18, 14);
  std::uniform_int_distribution<int> pi(0, 17), pj(0, 13);
  std::uniform_real_distribution<double> pz(1.0, 3.0);
  std::set<std::pair<int, int>> used;
  SeedList expected;
  while (used.size() < 10) {
    const int i = pi(rng), j = pj(rng);
    if (!used.insert({i, j}).second) continue;
    const float z = static_cast<float>(pz(rng));
    tof.depth.set(i, j, z);
    // Oracle: explicit per-point arithmetic.
    const double X[4] = {(i - 9.0) * z / 60.0, (j - 7.0) * z / 61.0, z, 1.0};
    double W[4] = {0, 0, 0, 0};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) W[r] += rig.tof_to_world[r][c] * X[c];
    const double xl = kF * W[0] + kCx * W[2], yl = kF * W[1] + kCy * W[2], wl = W[2];
    const double xr = kF * W[0] + kCx * W[2] - kF * kB, wr = W[2];
    const SeedCorrespondence s{static_cast<int>(std::lround(xl / wl)),
                               static_cast<int>(std::lround(xr / wr)),
                               static_cast<int>(std::lround(yl / wl))};
    ASSERT_TRUE(seed_in_bounds(s, 320, 240));
    expected.push_back(s);
  }
  std::sort(expected.begin(), expected.end());
  expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
  EXPECT_EQ(project_tof_seeds(tof, rig, 320, 240), expected);
}

TEST(ProjectTof, RowMismatchAndOutOfImageRejected) {
  auto rig = identity_rig();
  rig.p_right[1][3] = kF * 0.01;  // 5 px vertical offset at z = 1
  auto tof = empty_frame(17, 13);
  tof.depth.set(8, 6, 1.0f);
  EXPECT_TRUE(project_tof_seeds(tof, rig, 320, 240).empty());
  // Point too close: disparity larger than the image is wide.
  tof.depth.set(8, 6, 0.1f);
  EXPECT_TRUE(project_tof_seeds(tof, identity_rig(), 320, 240).empty());
}

TEST(ProjectTof, ImagesMustMatch) {
  EXPECT_THROW(project_tof_seeds(empty_frame(2, 2), identity_rig(), flat(10, 10, 0.5f),
                                 flat(11, 10, 0.5f)),
               std::invalid_argument);
}

TEST(Calibration, RoundTripAndValidation) {
  const auto rig = identity_rig();
  const auto parsed = parse_calibration(format_calibration(rig));
  EXPECT_EQ(parsed.p_left, rig.p_left);
  EXPECT_EQ(parsed.p_right, rig.p_right);
  EXPECT_EQ(parsed.tof_to_world, rig.tof_to_world);
  EXPECT_EQ(parsed.tof.fx, rig.tof.fx);

  auto bad = rig;
  bad.p_right[2] = {0, 0, 0, 0};
  EXPECT_THROW(bad.validate(), CalibrationError);
  bad = rig;
  bad.tof.fy = 0;
  EXPECT_THROW(bad.validate(), CalibrationError);
}

TEST(Calibration, FieldLevelDiagnostics) {
  auto text = format_calibration(identity_rig());
  try {
    parse_calibration("# header\n1 2 3\n4 five 6\n");
    FAIL() << "expected CalibrationError";
  } catch (const CalibrationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("five"), std::string::npos) << msg;
  }
  try {
    parse_calibration("1 2 3\n");
    FAIL() << "expected CalibrationError";
  } catch (const CalibrationError& e) {
    EXPECT_NE(std::string(e.what()).find("44"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_calibration(text + " 7\n"), CalibrationError);
}

TEST(SimulateTof, FullResolutionGrid) {
  DisparityMap gt(1330, 1110);
  for (int v = 0; v < 1110; ++v)
    for (int u = 0; u < 1330; ++u) gt.set(u, v, 0.0f);
  EXPECT_EQ(simulate_tof_seeds(gt, 10).size(), 14763u);
}

TEST(SimulateTof, StepOneAndInvalidBand) {
  DisparityMap gt(60, 8);
  for (int v = 0; v < 8; ++v)
    for (int u = 0; u < 60; ++u)
      if (u < 20 || u >= 40) gt.set(u, v, 2.4f);
  const auto all = simulate_tof_seeds(gt, 1);
  // u < 2 are dropped because u - round(d) < 0.
  EXPECT_EQ(all.size(), static_cast<std::size_t>(8 * (18 + 20)));
  for (const auto& s : all) {
    EXPECT_FALSE(s.u >= 20 && s.u < 40);
    EXPECT_EQ(s.disparity(), 2);
  }
  EXPECT_THROW(simulate_tof_seeds(gt, 0), std::invalid_argument);
}

TEST(SimulateTof, DeterministicAndCanonical) {
  const auto scene = fusegrow::testing::render_scene(fusegrow::testing::weak_texture_spec(200, 150, 4));
  const auto a = simulate_tof_seeds(scene.gt_left, 7);
  const auto b = simulate_tof_seeds(scene.gt_left, 7);
  EXPECT_EQ(a, b);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  for (const auto& s : a) {
    EXPECT_EQ(s.u % 7, 0);
    EXPECT_EQ(s.v % 7, 0);
    EXPECT_TRUE(seed_in_bounds(s, 200, 150));
  }
}

TEST(RefineSeeds, BlackImageDropsEverything) {
  const SeedList seeds{{10, 5, 10}, {20, 15, 12}};
  RefineReport report;
  EXPECT_TRUE(refine_seeds(seeds, flat(40, 30, 0.0f), flat(40, 30, 0.0f), {}, &report).empty());
  EXPECT_EQ(report.dropped_dark, 2u);
}

TEST(RefineSeeds, DarkInRightImageOnly) {
  std::vector<float> r(40 * 30, 0.5f);
  for (int v = 0; v < 30; ++v)
    for (int u = 0; u < 10; ++u) r[v * 40 + u] = 0.0f;
  const auto right = GrayImage::from_values(40, 30, r);
  const SeedList seeds{{10, 5, 10}, {30, 25, 10}};
  EXPECT_EQ(refine_seeds(seeds, flat(40, 30, 0.5f), right), (SeedList{{30, 25, 10}}));
}

TEST(RefineSeeds, SamePixelForegroundWins) {
  const SeedList seeds{{50, 10, 10}, {50, 40, 10}};
  EXPECT_EQ(refine_seeds(seeds, flat(80, 30, 0.5f), flat(80, 30, 0.5f)), (SeedList{{50, 10, 10}}));
}

TEST(RefineSeeds, GapAndDistanceThresholds) {
  const auto L = flat(80, 30, 0.5f), R = flat(80, 30, 0.5f);
  // Disparity gap exactly 2 is tolerated.
  EXPECT_EQ(refine_seeds({{50, 40, 10}, {51, 39, 10}}, L, R).size(), 2u);
  // Gap 3 within distance 2 in the left image: background goes.
  EXPECT_EQ(refine_seeds({{50, 40, 10}, {52, 39, 12}}, L, R), (SeedList{{52, 39, 12}}));
  // Distance 3 in both images: both stay.
  EXPECT_EQ(refine_seeds({{50, 40, 10}, {53, 30, 10}}, L, R).size(), 2u);
  // Far apart in the left image but overlapping in the right one.
  EXPECT_EQ(refine_seeds({{20, 10, 10}, {40, 11, 10}}, L, R), (SeedList{{40, 11, 10}}));
}

TEST(RefineSeeds, ChainKeepsWitness) {
  // c occludes b, b would occlude a; b is dropped first so a survives only if no
  // retained seed dominates it.
  const auto L = flat(100, 30, 0.5f), R = flat(100, 30, 0.5f);
  const SeedList seeds{{60, 50, 10}, {62, 46, 10}, {64, 40, 10}};
  const auto out = refine_seeds(seeds, L, R);
  EXPECT_EQ(out, (SeedList{{60, 50, 10}, {64, 40, 10}}));
}

TEST(RefineSeeds, Invariants) {
  namespace ts = fusegrow::testing;
  const auto scene = ts::render_scene(ts::weak_texture_spec(300, 200, 21));
  const auto clean = simulate_tof_seeds(scene.gt_left, 6);
  const auto noisy = ts::corrupt_with_occlusion_seeds(scene, clean, 0.12, 5);
  RefineParams params;
  RefineReport report;
  const auto out = refine_seeds(noisy, scene.left, scene.right, params, &report);
  EXPECT_TRUE(std::is_sorted(out.begin(), out.end()));
  EXPECT_TRUE(std::includes(noisy.begin(), noisy.end(), out.begin(), out.end()));
  EXPECT_EQ(report.input, noisy.size());
  EXPECT_EQ(report.input - report.dropped_dark - report.dropped_occluded, out.size());
  std::set<SeedCorrespondence> kept(out.begin(), out.end());
  for (const auto& s : noisy) {
    if (kept.count(s)) continue;
    if (neighbourhood_mean(scene.left, s.u, s.v, 5) < params.dark_threshold ||
        neighbourhood_mean(scene.right, s.u_prime, s.v, 5) < params.dark_threshold)
      continue;
    const bool witnessed = std::any_of(out.begin(), out.end(), [&](const SeedCorrespondence& k) {
      const bool near_l = std::max(std::abs(k.u - s.u), std::abs(k.v - s.v)) <= 2;
      const bool near_r = std::max(std::abs(k.u_prime - s.u_prime), std::abs(k.v - s.v)) <= 2;
      return (near_l || near_r) && k.disparity() > s.disparity() + params.depth_gap;
    });
    EXPECT_TRUE(witnessed) << s.u << "," << s.u_prime << "," << s.v;
  }
  // No surviving pair is still in conflict.
  for (const auto& a : out)
    for (const auto& b : out) {
      const bool near_l = std::max(std::abs(a.u - b.u), std::abs(a.v - b.v)) <= 2;
      const bool near_r = std::max(std::abs(a.u_prime - b.u_prime), std::abs(a.v - b.v)) <= 2;
      if (near_l || near_r) { EXPECT_LE(std::abs(a.disparity() - b.disparity()), params.depth_gap); }
    }
}

TEST(NeighbourhoodMean, ClipsAtBorder) {
  std::vector<float> v(4 * 4, 0.0f);
  v[0] = 1.0f;
  const auto img = GrayImage::from_values(4, 4, v);
  EXPECT_DOUBLE_EQ(neighbourhood_mean(img, 0, 0, 5), 1.0 / 9.0);
  EXPECT_DOUBLE_EQ(neighbourhood_mean(img, 2, 2, 5), 1.0 / 16.0);
}

TEST(SeedsCsv, RoundTripAndErrors) {
  const SeedList seeds{{3, 1, 0}, {7, 2, 4}};
  std::stringstream ss;
  write_seeds_csv(ss, seeds);
  EXPECT_EQ(ss.str(), "u,u_prime,v\n3,1,0\n7,2,4\n");
  EXPECT_EQ(read_seeds_csv(ss), seeds);

  std::istringstream bad_header("x,y,z\n1,2,3\n");
  EXPECT_THROW(read_seeds_csv(bad_header), std::runtime_error);
  std::istringstream bad_row("u,u_prime,v\n1,2\n");
  EXPECT_THROW(read_seeds_csv(bad_row), std::runtime_error);

  fusegrow::testing::TempDir dir;
  save_seeds_csv({{7, 2, 4}, {3, 1, 0}, {3, 1, 0}}, dir / "s.csv");
  EXPECT_EQ(load_seeds_csv(dir / "s.csv"), seeds);
}
