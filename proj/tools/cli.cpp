#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "fusegrow/eval.hpp"
#include "fusegrow/grower.hpp"
#include "fusegrow/image_io.hpp"
#include "fusegrow/parallel.hpp"
#include "fusegrow/postproc.hpp"
#include "fusegrow/prior.hpp"
#include "fusegrow/seeding.hpp"
#include "fusegrow/similarity.hpp"
#include "json.hpp"

namespace fusegrow::cli {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- simulate-tof ------------------------------------------------------------

struct SimulateArgs {
  std::string gt;
  int step = 10;
  double scale = 1.0;
  std::string out;
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
  app.add_option("--gt", a.gt, "Ground-truth disparity (PFM, or PNG/PGM with 0 = unknown)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--step", a.step, "Grid spacing in pixels")->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--scale", a.scale, "Multiplier applied to stored disparities")
      ->capture_default_str();
  app.add_option("--out", a.out, "Seeds CSV")->required();
}

int run_simulate(const SimulateArgs& a, std::ostream& out) {
  const DisparityMap gt = load_disparity(a.gt, a.scale);
  const SeedList seeds = simulate_tof_seeds(gt, a.step);
  save_seeds_csv(seeds, a.out);
  out << "seeds: " << seeds.size() << '\n';
  return kExitOk;
}

// --- project-tof -------------------------------------------------------------

struct ProjectArgs {
  std::string tof, calib, left, right, out;
  bool no_refine = false;
  RefineParams refine;
};

void add_project(CLI::App& app, ProjectArgs& a) {
  app.add_option("--tof", a.tof, "TOF depth map, PFM in metres")->required()->check(CLI::ExistingFile);
  app.add_option("--calib", a.calib, "Calibration text file")->required()->check(CLI::ExistingFile);
  app.add_option("--left", a.left, "Left rectified image")->required()->check(CLI::ExistingFile);
  app.add_option("--right", a.right, "Right rectified image")->required()->check(CLI::ExistingFile);
  app.add_flag("--no-refine", a.no_refine, "Skip dark and occupancy filtering");
  app.add_option("--dark-threshold", a.refine.dark_threshold, "Mean luminance below which seeds drop")
      ->capture_default_str();
  app.add_option("--depth-gap", a.refine.depth_gap, "Disparity gap marking background seeds")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--out", a.out, "Seeds CSV")->required();
}

int run_project(const ProjectArgs& a, std::ostream& out) {
  const CalibrationRig rig = load_calibration(a.calib);
  const GrayImage left = load_gray(a.left);
  const GrayImage right = load_gray(a.right);
  TofFrame tof{load_disparity_pfm(a.tof), std::nullopt};
  SeedList seeds = project_tof_seeds(tof, rig, left, right);
  out << "projected: " << seeds.size() << '\n';
  if (!a.no_refine) {
    RefineReport report;
    seeds = refine_seeds(seeds, left, right, a.refine, &report);
    out << "dropped dark: " << report.dropped_dark << ", dropped occluded: " << report.dropped_occluded
        << '\n';
  }
  save_seeds_csv(seeds, a.out);
  out << "seeds: " << seeds.size() << '\n';
  return kExitOk;
}

// --- grow / bench --------------------------------------------------------------

struct GrowArgs {
  std::string left, right, seeds;
  std::string stat = "epc";
  double tau = 0.5;
  double sigma_s_sq = 0.1;
  double sigma_p_sq = kDefaultSigmaPSq;
  std::string sigma_p_preset;
  int window = 5;
  bool fill = false;
  bool emit_seeds = false;
  std::string out, color_out, ply_out, prior_out, obj_out;
  bool invert_colors = false;
  std::optional<double> focal, baseline;
  std::string calib;
  int repeat = 3;
  int disparity_levels = 0;
  std::string json_out;

  CLI::Option* sigma_s_opt = nullptr;
  CLI::Option* sigma_p_opt = nullptr;
  CLI::Option* preset_opt = nullptr;
};

void add_grow_common(CLI::App& app, GrowArgs& a) {
  app.add_option("--left", a.left, "Left rectified image")->required()->check(CLI::ExistingFile);
  app.add_option("--right", a.right, "Right rectified image")->required()->check(CLI::ExistingFile);
  app.add_option("--seeds", a.seeds, "Seeds CSV")->required()->check(CLI::ExistingFile);
  app.add_option("--stat", a.stat, "Similarity statistic")
      ->check(CLI::IsMember({"mncc", "expssd", "epc"}, CLI::ignore_case))
      ->capture_default_str();
  app.add_option("--tau", a.tau, "Acceptance threshold")->capture_default_str();
  a.sigma_s_opt =
      app.add_option("--sigma-s-sq", a.sigma_s_sq, "Image likelihood scale")->check(CLI::PositiveNumber)
          ->capture_default_str();
  a.sigma_p_opt =
      app.add_option("--sigma-p-sq", a.sigma_p_sq, "Prior scale (pixels^2)")->check(CLI::PositiveNumber)
          ->capture_default_str();
  a.preset_opt = app.add_option("--sigma-p-preset", a.sigma_p_preset,
                                "Named prior scale: 'default' or 'narrow' (0.001)")
                     ->check(CLI::IsMember({"default", "narrow"}))
                     ->excludes(a.sigma_p_opt);
  app.add_option("--window", a.window, "Window side (odd)")->capture_default_str();
}

void add_grow(CLI::App& app, GrowArgs& a) {
  add_grow_common(app, a);
  app.add_flag("--fill-gaps", a.fill, "Median-fill small gaps after growing");
  app.add_flag("--emit-seeds", a.emit_seeds, "Also write seed disparities (diagnostic)");
  app.add_option("--out", a.out, "Output disparity PFM")->required();
  app.add_option("--color-out", a.color_out, "Colour-coded disparity (.png or .ppm)");
  app.add_flag("--invert-colors", a.invert_colors, "Warmer colours for nearer surfaces");
  app.add_option("--ply-out", a.ply_out, "ASCII PLY point/mesh export");
  auto* focal = app.add_option("--focal", a.focal, "Focal length in pixels for --ply-out");
  auto* base = app.add_option("--baseline", a.baseline, "Baseline for --ply-out");
  focal->needs(base);
  base->needs(focal);
  app.add_option("--calib", a.calib, "Calibration file supplying focal/baseline for --ply-out")
      ->check(CLI::ExistingFile)
      ->excludes(focal);
  app.add_option("--prior-out", a.prior_out, "Write the prior map (PFM) when --stat epc");
  app.add_option("--triangulation-out", a.obj_out, "Write the seed triangulation (OBJ-style text)");
}

void add_bench(CLI::App& app, GrowArgs& a) {
  add_grow_common(app, a);
  app.add_option("--repeat", a.repeat, "Timed repetitions")->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--disparity-levels", a.disparity_levels,
                 "Disparity range for the visited-fraction figure (default: max seed disparity + 1)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--json-out", a.json_out, "Write the timing summary as JSON");
}

GrowParams grow_params(const GrowArgs& a, std::ostream& err) {
  GrowParams p;
  p.tau = a.tau;
  p.similarity.window = a.window;
  p.similarity.sigma_s_sq = a.sigma_s_sq;
  p.similarity.sigma_p_sq = a.sigma_p_preset == "narrow" ? kNarrowSigmaPSq : a.sigma_p_sq;
  if (a.sigma_p_preset == "default") p.similarity.sigma_p_sq = kDefaultSigmaPSq;
  p.similarity.statistic = *parse_statistic(a.stat);
  const bool sigma_given = a.sigma_s_opt->count() > 0 || a.sigma_p_opt->count() > 0 ||
                           a.preset_opt->count() > 0;
  if (p.similarity.statistic == Statistic::mncc && sigma_given)
    err << "warning: --stat mncc ignores the sigma options\n";
  else if (p.similarity.statistic == Statistic::expssd &&
           (a.sigma_p_opt->count() > 0 || a.preset_opt->count() > 0))
    err << "warning: --stat expssd ignores the prior scale\n";
  try {
    p.similarity.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return p;
}

struct GrowInputs {
  GrayImage left, right;
  SeedList seeds;
  PriorMap prior;
  std::optional<SeedTriangulation> triangulation;
};

GrowInputs load_grow_inputs(const GrowArgs& a, const GrowParams& p) {
  GrowInputs in;
  in.left = load_gray(a.left);
  in.right = load_gray(a.right);
  if (in.left.width() != in.right.width() || in.left.height() != in.right.height())
    throw std::runtime_error("left and right images differ in size");
  in.seeds = load_seeds_csv(a.seeds);
  if (p.similarity.statistic == Statistic::epc) {
    if (in.seeds.empty()) throw std::runtime_error("--stat epc needs at least one seed for the prior");
    SeedList inside;
    for (const auto& s : in.seeds)
      if (s.u >= 0 && s.u < in.left.width() && s.v >= 0 && s.v < in.left.height())
        inside.push_back(s);
    in.triangulation = triangulate_seeds(inside);
    in.prior = in.triangulation ? interpolate_prior(*in.triangulation, in.left.width(), in.left.height())
                                : PriorMap(in.left.width(), in.left.height());
  }
  return in;
}

int run_grow(const GrowArgs& a, std::ostream& out, std::ostream& err) {
  const GrowParams params = grow_params(a, err);
  const GrowInputs in = load_grow_inputs(a, params);
  if (!a.prior_out.empty()) {
    if (params.similarity.statistic != Statistic::epc)
      err << "warning: --prior-out is only produced with --stat epc\n";
    else
      save_disparity_pfm(in.prior, a.prior_out);
  }
  if (!a.obj_out.empty() && in.triangulation) save_triangulation_obj(*in.triangulation, a.obj_out);

  const MatchState state = grow(in.left, in.right, in.seeds, in.prior, params);
  DisparityMap result = state.disparity;
  if (a.emit_seeds) overlay_seeds(result, in.seeds);
  if (a.fill) result = fill_gaps(result);
  save_disparity_pfm(result, a.out);

  if (!a.color_out.empty()) {
    ColorizeOptions opts;
    opts.invert = a.invert_colors;
    save_color(colorize(result, opts), a.color_out);
  }
  if (!a.ply_out.empty()) {
    StereoCamera cam;
    if (!a.calib.empty()) {
      cam = camera_from_rig(load_calibration(a.calib));
    } else if (a.focal && a.baseline) {
      cam.focal = *a.focal;
      cam.baseline = *a.baseline;
      cam.cx = (in.left.width() - 1) / 2.0;
      cam.cy = (in.left.height() - 1) / 2.0;
    } else {
      throw UsageError("--ply-out needs --calib or --focal/--baseline");
    }
    const PlyStats ply = export_ply(result, cam, a.ply_out);
    out << "ply: " << ply.vertices << " vertices, " << ply.faces << " faces\n";
  }
  const GrowthSummary s = grown_statistics(state);
  out << "seeds queued: " << s.seeds_queued << ", matched: " << s.matched
      << ", density: " << s.density << ", evaluations: " << s.eval_count
      << ", evaluations/match: " << s.evals_per_match << '\n';
  return kExitOk;
}

int run_bench(const GrowArgs& a, std::ostream& out, std::ostream& err) {
  using clock = std::chrono::steady_clock;
  const GrowParams params = grow_params(a, err);
  const auto t0 = clock::now();
  const GrowInputs in = load_grow_inputs(a, params);
  const double prior_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();

  std::vector<double> times;
  MatchState state;
  for (int i = 0; i < a.repeat; ++i) {
    const auto start = clock::now();
    state = grow(in.left, in.right, in.seeds, in.prior, params);
    times.push_back(std::chrono::duration<double, std::milli>(clock::now() - start).count());
  }
  std::sort(times.begin(), times.end());
  int levels = a.disparity_levels;
  if (levels <= 0) {
    for (const auto& s : in.seeds) levels = std::max(levels, s.disparity() + 1);
    levels = std::max(levels, 1);
  }
  const GrowthSummary s = grown_statistics(state);
  const double bound = 12.0 * static_cast<double>(s.seeds_queued + s.matched);
  const double visited = visited_fraction(state, levels);

  nlohmann::ordered_json j;
  j["statistic"] = std::string(to_string(params.similarity.statistic));
  j["width"] = in.left.width();
  j["height"] = in.left.height();
  j["threads"] = thread_count();
  j["load_and_prior_ms"] = prior_ms;
  j["grow_ms_min"] = times.front();
  j["grow_ms_median"] = times[times.size() / 2];
  j["seeds_queued"] = s.seeds_queued;
  j["matched"] = s.matched;
  j["pops"] = s.pops;
  j["eval_count"] = s.eval_count;
  j["eval_bound"] = bound;
  j["evals_per_match"] = s.evals_per_match;
  j["disparity_levels"] = levels;
  j["visited_fraction"] = visited;
  out << j.dump(2) << '\n';
  if (!a.json_out.empty()) write_file_bytes(a.json_out, j.dump(2) + "\n");
  return kExitOk;
}

// --- prior -------------------------------------------------------------------

struct PriorArgs {
  std::string seeds, like, out, obj_out;
};

void add_prior(CLI::App& app, PriorArgs& a) {
  app.add_option("--seeds", a.seeds, "Seeds CSV")->required()->check(CLI::ExistingFile);
  app.add_option("--like", a.like, "Image whose size the prior takes")->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", a.out, "Prior map PFM")->required();
  app.add_option("--triangulation-out", a.obj_out, "Seed triangulation (OBJ-style text)");
}

int run_prior(const PriorArgs& a, std::ostream& out) {
  const GrayImage like = load_gray(a.like);
  const SeedList seeds = load_seeds_csv(a.seeds);
  const auto tri = triangulate_seeds(seeds);
  const PriorMap prior =
      tri ? interpolate_prior(*tri, like.width(), like.height()) : PriorMap(like.width(), like.height());
  if (!tri) out << "warning: seeds cannot be triangulated; prior is empty\n";
  save_disparity_pfm(prior, a.out);
  if (tri && !a.obj_out.empty()) save_triangulation_obj(*tri, a.obj_out);
  out << "prior valid pixels: " << prior.valid_count() << '\n';
  return kExitOk;
}

// --- evaluate ----------------------------------------------------------------

struct EvaluateArgs {
  std::string est, gt_left, gt_right, mask;
  double gt_scale = 1.0;
  double est_scale = 1.0;
  std::string scene = "scene", variant = "variant", out;
  bool append = false;
};

void add_evaluate(CLI::App& app, EvaluateArgs& a) {
  app.add_option("--est", a.est, "Estimated disparity")->required()->check(CLI::ExistingFile);
  app.add_option("--gt-left", a.gt_left, "Left ground truth")->required()->check(CLI::ExistingFile);
  auto* right = app.add_option("--gt-right", a.gt_right, "Right ground truth (mask by cross-check)")
                    ->check(CLI::ExistingFile);
  app.add_option("--mask", a.mask, "Evaluation mask image (max value = evaluate)")
      ->check(CLI::ExistingFile)
      ->excludes(right);
  app.add_option("--gt-scale", a.gt_scale, "Multiplier for ground-truth values")->capture_default_str();
  app.add_option("--est-scale", a.est_scale, "Multiplier for estimated values")->capture_default_str();
  app.add_option("--scene", a.scene, "Scene label")->capture_default_str();
  app.add_option("--variant", a.variant, "Variant label")->capture_default_str();
  app.add_option("--out", a.out, "JSON-lines report file");
  app.add_flag("--append", a.append, "Append to --out instead of replacing it");
}

int run_evaluate(const EvaluateArgs& a, std::ostream& out) {
  if (a.gt_right.empty() && a.mask.empty())
    throw UsageError("evaluate needs --gt-right or --mask");
  const DisparityMap est = load_disparity(a.est, a.est_scale);
  const DisparityMap gt = load_disparity(a.gt_left, a.gt_scale);
  const Mask mask = a.mask.empty() ? nonoccluded_mask(gt, load_disparity(a.gt_right, a.gt_scale))
                                   : load_mask(a.mask);
  EvaluationReport report = evaluate(est, gt, mask);
  report.scene = a.scene;
  report.variant = a.variant;
  print_report_table(out, {report});
  if (!a.out.empty()) {
    std::ofstream f(a.out, a.append ? std::ios::app : std::ios::trunc);
    if (!f) throw IoError("cannot write '" + a.out + "'");
    f << to_json_line(report) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_threads_from_env();

  CLI::App app{"Seed-growing stereo matching fused with sparse range seeds"};
  app.set_config("--config", "", "TOML/INI file supplying any option; explicit flags win");
  app.require_subcommand(1);

  SimulateArgs simulate;
  ProjectArgs project;
  GrowArgs grow_args, bench_args;
  PriorArgs prior;
  EvaluateArgs evaluate_args;
  auto* sim_cmd = app.add_subcommand("simulate-tof", "Sample ground truth on a grid as range seeds");
  add_simulate(*sim_cmd, simulate);
  auto* proj_cmd = app.add_subcommand("project-tof", "Project a TOF depth map into seeds");
  add_project(*proj_cmd, project);
  auto* grow_cmd = app.add_subcommand("grow", "Grow a disparity map from seeds");
  add_grow(*grow_cmd, grow_args);
  auto* prior_cmd = app.add_subcommand("prior", "Triangulate seeds into a prior disparity map");
  add_prior(*prior_cmd, prior);
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a disparity map against ground truth");
  add_evaluate(*eval_cmd, evaluate_args);
  auto* bench_cmd = app.add_subcommand("bench", "Time the grow stage and report search statistics");
  add_bench(*bench_cmd, bench_args);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*sim_cmd) return run_simulate(simulate, out);
    if (*proj_cmd) return run_project(project, out);
    if (*grow_cmd) return run_grow(grow_args, out, err);
    if (*prior_cmd) return run_prior(prior, out);
    if (*eval_cmd) return run_evaluate(evaluate_args, out);
    if (*bench_cmd) return run_bench(bench_args, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace fusegrow::cli
