#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "aerloc/kernels.hpp"
#include "aerloc/raster_map.hpp"
#include "aerloc/sim.hpp"
#include "aerloc/similarity.hpp"

using namespace aerloc;

namespace {

struct Fixture {
  RasterMap map = generate_world(WorldSpec{});
  CameraModel cam;
  double altitude = 200.0;
  Image8 frame;
  std::vector<Pose2D> poses;

  Fixture() {
    const Pose2D truth{1024.0, 1024.0, 0.3};
    frame = *extract_patch(map, truth, altitude, cam);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> offset(0.0, 30.0);
    for (int i = 0; i < 1024; ++i) {
      poses.push_back({truth.x + offset(rng), truth.y + offset(rng), truth.yaw + 0.01 * offset(rng)});
    }
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_EvaluateParallel(benchmark::State& state) {
  Fixture& f = fixture();
  const FrameCorrelator corr(f.frame.view());
  const EvaluationContext ctx{f.map, corr, f.altitude, f.cam, {ConversionKind::logistic, 0.2}};
  std::vector<double> out(f.poses.size());
  for (auto _ : state) {
    evaluate_particles(ctx, f.poses, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.poses.size()));
}

void BM_EvaluateSerial(benchmark::State& state) {
  Fixture& f = fixture();
  const FrameCorrelator corr(f.frame.view());
  const EvaluationContext ctx{f.map, corr, f.altitude, f.cam, {ConversionKind::logistic, 0.2}};
  std::vector<double> out(f.poses.size());
  for (auto _ : state) {
    evaluate_particles_serial(ctx, f.poses, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.poses.size()));
}

void BM_CorrelateIntegerMoments(benchmark::State& state) {
  Fixture& f = fixture();
  const FrameCorrelator corr(f.frame.view());
  const Image8 patch = *extract_patch(f.map, f.poses[0], f.altitude, f.cam);
  for (auto _ : state) benchmark::DoNotOptimize(corr.correlate(patch.view()));
}

void BM_CorrelateTwoPassDouble(benchmark::State& state) {
  Fixture& f = fixture();
  const Image8 patch = *extract_patch(f.map, f.poses[0], f.altitude, f.cam);
  const std::vector<double> a(f.frame.data.begin(), f.frame.data.end());
  const std::vector<double> b(patch.data.begin(), patch.data.end());
  for (auto _ : state) benchmark::DoNotOptimize(pearson(std::span<const double>(a), std::span<const double>(b)));
}

}  // namespace

BENCHMARK(BM_EvaluateParallel)->UseRealTime();
BENCHMARK(BM_EvaluateSerial)->UseRealTime();
BENCHMARK(BM_CorrelateIntegerMoments);
BENCHMARK(BM_CorrelateTwoPassDouble);

BENCHMARK_MAIN();
