#include <array>
#include <stdexcept>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "aerloc/similarity.hpp"
#include "aerloc/sim.hpp"

using namespace aerloc;

namespace {

WorldSpec spec_for(std::uint64_t seed, TerrainKind terrain = TerrainKind::fractal) {
  WorldSpec ws;
  ws.seed = seed;
  ws.terrain = terrain;
  return ws;
}

double map_pearson(const RasterMap& a, const RasterMap& b) {
  return *pearson(a.pixels().view(), b.pixels().view());
}

}  // namespace

TEST_CASE("worlds are pure in their spec") {
  for (const auto terrain : {TerrainKind::fractal, TerrainKind::urban_blocks}) {
    const RasterMap a = generate_world(spec_for(7, terrain));
    const RasterMap b = generate_world(spec_for(7, terrain));
    CHECK(a.pixels() == b.pixels());
    CHECK(a.width_px() == 1024);
    CHECK(a.gsd() == 2.0);
  }
}

TEST_CASE("fractal worlds use the full range and decorrelate across seeds") {
  const RasterMap a = generate_world(spec_for(1));
  const auto [lo, hi] = std::minmax_element(a.pixels().data.begin(), a.pixels().data.end());
  CHECK(*lo == 0);
  CHECK(*hi == 255);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const double r = map_pearson(generate_world(spec_for(100 + 2 * s)), generate_world(spec_for(101 + 2 * s)));
    CHECK(std::fabs(r) < 0.3);
  }
}

TEST_CASE("urban worlds are piecewise constant with sharp edges") {
  const RasterMap m = generate_world(spec_for(3, TerrainKind::urban_blocks));
  const Image8& img = m.pixels();
  std::size_t zero = 0, small = 0, large = 0;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 1; x < img.width; ++x) {
      const int g = std::abs(img.at(x, y) - img.at(x - 1, y));
      if (g == 0) {
        ++zero;
      } else if (g < 10) {
        ++small;
      } else {
        ++large;
      }
    }
  }
  // Bimodal: mostly flat, edges mostly strong, very few gentle steps.
  CHECK(zero > 8 * (small + large));
  CHECK(large > 5 * small);
}

TEST_CASE("world spec validation") {
  WorldSpec ws;
  ws.size_px = 100;
  CHECK_THROWS_AS(generate_world(ws), std::invalid_argument);
  CHECK_THROWS_AS(parse_terrain("lunar"), std::invalid_argument);
  CHECK(parse_terrain("urban") == TerrainKind::urban_blocks);
}

TEST_CASE("line flight arithmetic") {
  const RasterMap map = generate_world(spec_for(1));
  FlightPlan plan;
  plan.start = centered_start(plan, map);
  const FlightLog log = generate_flight(plan, map);
  REQUIRE(log.frames.size() == 201);
  for (std::size_t t = 1; t < log.frames.size(); ++t) {
    const auto& a = log.frames[t - 1].truth;
    const auto& b = log.frames[t].truth;
    CHECK(std::hypot(b.x - a.x, b.y - a.y) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(b.yaw == 0.0);
    CHECK(log.frames[t].t_sec == doctest::Approx(t * 0.2));
  }
  CHECK(log.frames.front().truth.x == doctest::Approx(524.0));
  CHECK(log.frames.back().truth.x == doctest::Approx(1524.0));
}

TEST_CASE("circle flight stays on its radius and closes") {
  const RasterMap map = generate_world(spec_for(1));
  FlightPlan plan;
  plan.shape = FlightShape::circle;
  plan.start = {1024.0, 700.0, 0.4};
  const FlightLog log = generate_flight(plan, map);
  const double cx = plan.start.x - plan.radius * std::sin(plan.start.yaw);
  const double cy = plan.start.y + plan.radius * std::cos(plan.start.yaw);
  for (const auto& f : log.frames) {
    CHECK(std::fabs(std::hypot(f.truth.x - cx, f.truth.y - cy) - plan.radius) < 1e-6);
  }
  const auto& first = log.frames.front().truth;
  const auto& last = log.frames.back().truth;
  CHECK(std::hypot(last.x - first.x, last.y - first.y) <= plan.speed / plan.frame_rate + 1e-9);
}

TEST_CASE("rectangle flight turns a full lap") {
  const RasterMap map = generate_world(spec_for(1));
  FlightPlan plan;
  plan.shape = FlightShape::rectangle;
  plan.start = centered_start(plan, map);
  const FlightLog log = generate_flight(plan, map);
  double turn = 0.0;
  int corners = 0;
  for (std::size_t t = 1; t < log.frames.size(); ++t) {
    const double d = normalize_angle(log.frames[t].truth.yaw - log.frames[t - 1].truth.yaw);
    turn += d;
    corners += std::fabs(d) > 0.1;
  }
  turn += normalize_angle(log.frames.front().truth.yaw - log.frames.back().truth.yaw);
  CHECK(turn == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(corners >= 3);
}

TEST_CASE("flight leaving the map margin is rejected") {
  const RasterMap map = generate_world(spec_for(1));
  FlightPlan plan;
  plan.start = {100.0, 1024.0, 0.0};
  CHECK_THROWS_AS(generate_flight(plan, map), std::invalid_argument);
  plan.start = {1024.0, 1024.0, 0.0};
  plan.length = 5000.0;
  CHECK_THROWS_AS(generate_flight(plan, map), std::invalid_argument);
}

TEST_CASE("render_frame noise") {
  const RasterMap map = generate_world(spec_for(2));
  const CameraModel cam;
  Rng rng(5);
  int correlated = 0;
  for (int i = 0; i < 20; ++i) {
    const Pose2D pose{700.0 + 30.0 * i, 1000.0, 0.1 * i};
    const Image8 clean = *extract_patch(map, pose, 200.0, cam);
    CHECK(render_frame(map, pose, 200.0, cam, 0.0, rng) == clean);
    const Image8 noisy = render_frame(map, pose, 200.0, cam, 2.0, rng);
    double mad = 0.0;
    for (std::size_t k = 0; k < clean.data.size(); ++k) mad += std::abs(clean.data[k] - noisy.data[k]);
    mad /= clean.data.size();
    CHECK(mad >= 1.2);
    CHECK(mad <= 2.0);
    correlated += *pearson(clean, noisy) > 0.95;
  }
  CHECK(correlated == 20);
  CHECK_THROWS_AS(render_frame(map, {5.0, 5.0, 0.0}, 200.0, cam, 2.0, rng), std::invalid_argument);
}

TEST_CASE("frames discriminate the true pose from a distant one") {
  const RasterMap map = generate_world(spec_for(4));
  const CameraModel cam;
  Rng rng(6);
  std::uniform_real_distribution<double> pos(400.0, 1650.0), ang(-3.14, 3.14);
  int lower = 0;
  for (int i = 0; i < 100; ++i) {
    const Pose2D truth{pos(rng), pos(rng), ang(rng)};
    const Image8 frame = render_frame(map, truth, 200.0, cam, 2.0, rng);
    const double a = ang(rng);
    const Pose2D away{truth.x + 100.0 * std::cos(a), truth.y + 100.0 * std::sin(a), truth.yaw};
    const double at_truth = *pearson(frame, *extract_patch(map, truth, 200.0, cam));
    CHECK(at_truth > 0.95);
    lower += *pearson(frame, *extract_patch(map, away, 200.0, cam)) < at_truth;
  }
  CHECK(lower >= 95);
}

TEST_CASE("aging degrades monotonically") {
  const RasterMap map = generate_world(spec_for(9));
  CHECK(age_map(map, AgeSpec::from_level(0.0, 1)).pixels() == map.pixels());
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const double quarter = map_pearson(map, age_map(map, AgeSpec::from_level(0.25, s)));
    const double half = map_pearson(map, age_map(map, AgeSpec::from_level(0.5, s)));
    CHECK(half < quarter);
    CHECK(quarter < 1.0);
  }
  const RasterMap a = age_map(map, AgeSpec::from_level(0.5, 3));
  const RasterMap b = age_map(map, AgeSpec::from_level(0.5, 3));
  CHECK(a.pixels() == b.pixels());
  CHECK_THROWS_AS(AgeSpec::from_level(1.5, 1), std::invalid_argument);
}

TEST_CASE("occlusion covers the requested share") {
  const RasterMap map = generate_world(spec_for(10));
  AgeSpec age;
  age.level = 1.0;
  age.seed = 4;
  age.occlusion_fraction = 0.2;
  const RasterMap aged = age_map(map, age);
  std::size_t differ = 0;
  for (std::size_t k = 0; k < map.pixels().data.size(); ++k) {
    differ += map.pixels().data[k] != aged.pixels().data[k];
  }
  const double share = static_cast<double>(differ) / map.pixels().data.size();
  CHECK(share >= 0.15);
  CHECK(share <= 0.25);
}

TEST_CASE("texture change copies blocks from elsewhere in the map") {
  const RasterMap map = generate_world(spec_for(10));
  AgeSpec age;
  age.level = 1.0;
  age.seed = 5;
  age.change_fraction = 0.3;
  const RasterMap aged = age_map(map, age);
  std::size_t differ = 0;
  std::array<std::size_t, 256> before{}, after{};
  for (std::size_t k = 0; k < map.pixels().data.size(); ++k) {
    differ += map.pixels().data[k] != aged.pixels().data[k];
    ++before[map.pixels().data[k]];
    ++after[aged.pixels().data[k]];
  }
  const double share = static_cast<double>(differ) / map.pixels().data.size();
  CHECK(share >= 0.2);
  CHECK(share <= 0.3);
  // Copied texture keeps the intensity spread instead of flattening it.
  std::size_t levels_before = 0, levels_after = 0;
  for (int v = 0; v < 256; ++v) {
    levels_before += before[v] > 0;
    levels_after += after[v] > 0;
  }
  CHECK(levels_after + 5 >= levels_before);
  age.change_fraction = 1.5;
  CHECK_THROWS_AS(age_map(map, age), std::invalid_argument);
}

TEST_CASE("synthetic odometry") {
  const RasterMap map = generate_world(spec_for(1));
  FlightPlan plan;
  plan.start = centered_start(plan, map);
  FlightLog log = generate_flight(plan, map);
  Rng rng(1);

  const auto exact = synth_odometry(log, 0.0, {0.0, 0.0}, rng);
  for (std::size_t t = 0; t < log.frames.size(); ++t) log.frames[t].odometry = exact[t];
  auto dr = dead_reckoning(log);
  for (std::size_t t = 0; t < log.frames.size(); ++t) {
    CHECK(std::hypot(dr[t].x - log.frames[t].truth.x, dr[t].y - log.frames[t].truth.y) < 1e-9);
  }

  const auto drift = synth_odometry(log, 0.02, {0.0, 0.0}, rng);
  for (std::size_t t = 0; t < log.frames.size(); ++t) log.frames[t].odometry = drift[t];
  dr = dead_reckoning(log);
  CHECK(dr.back().x - log.frames.back().truth.x == doctest::Approx(20.0).epsilon(0.025));

  // Noisy odometry error grows along the path, averaged over seeds.
  std::vector<double> err(3, 0.0);
  const std::size_t checkpoints[] = {50, 100, 200};
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng noise_rng(100 + s);
    const auto noisy = synth_odometry(log, 0.0, {0.3, 0.01}, noise_rng);
    for (std::size_t t = 0; t < log.frames.size(); ++t) log.frames[t].odometry = noisy[t];
    dr = dead_reckoning(log);
    for (int c = 0; c < 3; ++c) {
      const auto& truth = log.frames[checkpoints[c]].truth;
      err[c] += std::hypot(dr[checkpoints[c]].x - truth.x, dr[checkpoints[c]].y - truth.y);
    }
  }
  CHECK(err[0] < err[1]);
  CHECK(err[1] < err[2]);

  FlightLog one = log;
  one.frames.resize(1);
  CHECK_THROWS_AS(synth_odometry(one, 0.0, {}, rng), std::invalid_argument);
}

TEST_CASE("simulated flights are pure in their seed") {
  const RasterMap map = generate_world(spec_for(1));
  FlightPlan plan;
  plan.start = centered_start(plan, map);
  const FlightLog a = simulate_flight(map, plan, 2.0, 0.02, {}, 5);
  const FlightLog b = simulate_flight(map, plan, 2.0, 0.02, {}, 5);
  REQUIRE(a.frames.size() == b.frames.size());
  for (std::size_t t = 0; t < a.frames.size(); ++t) {
    CHECK(a.frames[t].image == b.frames[t].image);
    CHECK(a.frames[t].odometry.d_tran == b.frames[t].odometry.d_tran);
    CHECK(a.frames[t].odometry.d_rot == b.frames[t].odometry.d_rot);
  }
}
