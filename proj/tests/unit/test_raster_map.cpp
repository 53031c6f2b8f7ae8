#include <stdexcept>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "aerloc/raster_map.hpp"

using namespace aerloc;

namespace {

RasterMap random_map(int w, int h, double gsd, unsigned seed) {
  Image8 img(w, h);
  std::mt19937 rng(seed);
  for (auto& p : img.data) p = static_cast<std::uint8_t>(rng() & 0xFF);
  return RasterMap(std::move(img), gsd, {0.0, 0.0});
}

// Altitude whose 60 degree footprint is exactly `side` meters.
double altitude_for(double side) { return side / (2.0 * std::tan(std::numbers::pi / 6.0)); }

}  // namespace

TEST_CASE("world_to_pixel floors by gsd") {
  const RasterMap unit(Image8(10, 10), 1.0, {0.0, 0.0});
  CHECK(unit.world_to_pixel({3.5, 2.5}) == PixelIndex{3, 2});
  CHECK_FALSE(unit.world_to_pixel({-1.0, 0.0}).has_value());
  CHECK_FALSE(unit.world_to_pixel({10.0, 5.0}).has_value());

  const RasterMap half(Image8(10, 10), 0.5, {0.0, 0.0});
  CHECK(half.world_to_pixel({3.5, 2.5}) == PixelIndex{7, 5});
}

TEST_CASE("pixel centers round-trip") {
  const RasterMap map(Image8(37, 23), 0.7, {-12.25, 40.5});
  for (int r = 0; r < 23; ++r) {
    for (int c = 0; c < 37; ++c) {
      const auto back = map.world_to_pixel(map.pixel_to_world({c, r}));
      REQUIRE(back.has_value());
      CHECK(*back == PixelIndex{c, r});
    }
  }
}

TEST_CASE("raster map rejects bad geometry") {
  CHECK_THROWS_AS(RasterMap(Image8(4, 4), 0.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(RasterMap(Image8(4, 4), -1.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(RasterMap(Image8(0, 4), 1.0, {}), std::invalid_argument);
}

TEST_CASE("to_grayscale uses BT.601 luma") {
  Image8 rgb(3, 1, 3);
  const std::uint8_t px[] = {255, 255, 255, 0, 0, 0, 255, 0, 0};
  std::copy(std::begin(px), std::end(px), rgb.data.begin());
  const Image8 g = to_grayscale(rgb);
  CHECK(g.channels == 1);
  CHECK(g.data[0] == 255);
  CHECK(g.data[1] == 0);
  CHECK(g.data[2] == 76);
  CHECK_THROWS_AS(to_grayscale(Image8(2, 2, 2)), std::invalid_argument);
}

TEST_CASE("axis-aligned patch equals a crop") {
  const RasterMap map = random_map(200, 200, 1.0, 3);
  const CameraModel cam{60.0, 64};
  const auto patch = extract_patch(map, {100.0, 90.0, 0.0}, altitude_for(64.0), cam);
  REQUIRE(patch.has_value());
  for (int v = 0; v < 64; ++v) {
    for (int u = 0; u < 64; ++u) {
      CHECK(patch->at(u, v) == map.pixels().at(100 - 32 + u, 90 - 32 + v));
    }
  }
}

TEST_CASE("half-turn patch is the rotated crop") {
  const RasterMap map = random_map(200, 200, 1.0, 4);
  const CameraModel cam{60.0, 64};
  const double alt = altitude_for(64.0);
  const auto p0 = extract_patch(map, {100.0, 100.0, 0.0}, alt, cam);
  const auto p1 = extract_patch(map, {100.0, 100.0, std::numbers::pi}, alt, cam);
  REQUIRE(p0.has_value());
  REQUIRE(p1.has_value());
  for (int v = 0; v < 64; ++v) {
    for (int u = 0; u < 64; ++u) {
      CHECK(std::abs(p1->at(u, v) - p0->at(63 - u, 63 - v)) <= 1);
    }
  }
}

TEST_CASE("fixed-point interior agrees with bilinear reference") {
  const RasterMap map = random_map(300, 300, 1.3, 5);
  const CameraModel cam{60.0, 48};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pos(120.0, 270.0), yaw(-3.2, 3.2);
  for (int trial = 0; trial < 40; ++trial) {
    const Pose2D pose{pos(rng), pos(rng), yaw(rng)};
    const auto patch = extract_patch(map, pose, 60.0, cam);
    REQUIRE(patch.has_value());
    const double side = cam.footprint_side(60.0);
    const double step = side / cam.patch_px;
    const double c = std::cos(pose.yaw), s = std::sin(pose.yaw);
    for (int v = 0; v < cam.patch_px; v += 7) {
      for (int u = 0; u < cam.patch_px; u += 5) {
        const double a = (u + 0.5) * step - 0.5 * side;
        const double b = (v + 0.5) * step - 0.5 * side;
        const double fx = (pose.x + c * a - s * b) / map.gsd() - 0.5;
        const double fy = (pose.y + s * a + c * b) / map.gsd() - 0.5;
        const int x0 = static_cast<int>(std::floor(fx)), y0 = static_cast<int>(std::floor(fy));
        const double tx = fx - x0, ty = fy - y0;
        const auto& img = map.pixels();
        const double top = img.at(x0, y0) * (1 - tx) + img.at(x0 + 1, y0) * tx;
        const double bot = img.at(x0, y0 + 1) * (1 - tx) + img.at(x0 + 1, y0 + 1) * tx;
        const double ref = top * (1 - ty) + bot * ty;
        CHECK(std::abs(patch->at(u, v) - ref) <= 1.0);
      }
    }
  }
}

TEST_CASE("footprint leaving the map is rejected") {
  const RasterMap map = random_map(1024, 1024, 2.0, 6);
  const CameraModel cam;
  CHECK_FALSE(extract_patch(map, {1.0, 1024.0, 0.0}, 200.0, cam).has_value());
  CHECK(extract_patch(map, {1024.0, 1024.0, 0.3}, 200.0, cam).has_value());
  CHECK_THROWS_AS(extract_patch(map, {1024.0, 1024.0, 0.0}, 0.0, cam), std::invalid_argument);
}

TEST_CASE("normalize_angle wraps into (-pi, pi]") {
  CHECK(normalize_angle(std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(normalize_angle(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(normalize_angle(3 * std::numbers::pi / 2) == doctest::Approx(-std::numbers::pi / 2));
  CHECK(normalize_angle(0.25) == doctest::Approx(0.25));
}
