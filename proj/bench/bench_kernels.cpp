// Serial reference kernels against their OpenMP counterparts on a synthetic
// 1330x1110 scene. Thread count follows FUSEGROW_THREADS / OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "fusegrow/eval.hpp"
#include "fusegrow/grower.hpp"
#include "fusegrow/parallel.hpp"
#include "fusegrow/postproc.hpp"
#include "fusegrow/prior.hpp"
#include "fusegrow/reference.hpp"
#include "fusegrow/seeding.hpp"
#include "synthetic.hpp"

namespace {

using namespace fusegrow;

struct Fixture {
  testing::SyntheticScene scene;
  SeedList seeds;
  SeedTriangulation tri;
  DisparityMap sparse;
  Mask mask;

  Fixture() {
    scene = testing::render_scene(testing::weak_texture_spec(1330, 1110, 3));
    seeds = simulate_tof_seeds(scene.gt_left, 10);
    tri = *triangulate_seeds(seeds);
    // Every third pixel dropped so the gap filler has work to do.
    sparse = scene.gt_left;
    for (int v = 0; v < sparse.height(); ++v)
      for (int u = (v % 3); u < sparse.width(); u += 3) sparse.invalidate(u, v);
    mask = nonoccluded_mask(scene.gt_left, scene.gt_right);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_PriorReference(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::interpolate_prior(f.tri, f.scene.left.width(), f.scene.left.height()));
}

void BM_PriorParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(interpolate_prior(f.tri, f.scene.left.width(), f.scene.left.height()));
}

void BM_GapFillReference(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(reference::fill_gaps(f.sparse));
}

void BM_GapFillParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(fill_gaps(f.sparse));
}

void BM_MaskReference(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::nonoccluded_mask(f.scene.gt_left, f.scene.gt_right));
}

void BM_MaskParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(nonoccluded_mask(f.scene.gt_left, f.scene.gt_right));
}

void BM_EvaluateReference(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(reference::evaluate(f.sparse, f.scene.gt_left, f.mask));
}

void BM_EvaluateParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(f.sparse, f.scene.gt_left, f.mask));
}

void BM_GrowEpc(benchmark::State& state) {
  const auto& f = fixture();
  const auto prior = interpolate_prior(f.tri, f.scene.left.width(), f.scene.left.height());
  GrowParams params;
  params.similarity.statistic = Statistic::epc;
  for (auto _ : state)
    benchmark::DoNotOptimize(grow(f.scene.left, f.scene.right, f.seeds, prior, params));
}

BENCHMARK(BM_PriorReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PriorParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GapFillReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GapFillParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaskReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaskParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GrowEpc)->Unit(benchmark::kMillisecond);

const int kThreads = configure_threads_from_env();

}  // namespace

BENCHMARK_MAIN();
