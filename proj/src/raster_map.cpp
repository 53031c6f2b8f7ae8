#include "aerloc/raster_map.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace aerloc {

double normalize_angle(double radians) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::fmod(radians, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  if (a > std::numbers::pi) a -= kTwoPi;
  return a;
}

Image8::Image8(int w, int h, int c, std::uint8_t fill)
    : width(w), height(h), channels(c),
      data(static_cast<std::size_t>(w) * h * c, fill) {
  if (w < 0 || h < 0 || c < 1) throw std::invalid_argument("Image8: bad shape");
}

Image8 to_grayscale(const Image8& color) {
  if (color.channels == 1) return color;
  if (color.channels != 3) {
    throw std::invalid_argument("to_grayscale: unsupported channel count " +
                                std::to_string(color.channels));
  }
  Image8 gray(color.width, color.height, 1);
  for (std::size_t i = 0; i < gray.data.size(); ++i) {
    const double luma = 0.299 * color.data[3 * i] +
                        0.587 * color.data[3 * i + 1] +
                        0.114 * color.data[3 * i + 2];
    gray.data[i] = static_cast<std::uint8_t>(
        std::clamp(std::lround(luma), 0L, 255L));
  }
  return gray;
}

RasterMap::RasterMap(Image8 pixels, double gsd, Vec2 origin)
    : pixels_(std::move(pixels)), gsd_(gsd), origin_(origin) {
  if (pixels_.width < 1 || pixels_.height < 1) {
    throw std::invalid_argument("RasterMap: empty raster");
  }
  if (pixels_.channels != 1) {
    throw std::invalid_argument("RasterMap: raster must be single-channel");
  }
  if (!(gsd_ > 0.0) || !std::isfinite(gsd_)) {
    throw std::invalid_argument("RasterMap: gsd must be positive");
  }
}

bool RasterMap::contains(Vec2 p) const {
  const double u = (p.x - origin_.x) / gsd_;
  const double v = (p.y - origin_.y) / gsd_;
  return u >= 0.0 && v >= 0.0 && u < pixels_.width && v < pixels_.height;
}

std::optional<PixelIndex> RasterMap::world_to_pixel(Vec2 p) const {
  if (!contains(p)) return std::nullopt;
  const auto col = static_cast<int>(std::floor((p.x - origin_.x) / gsd_));
  const auto row = static_cast<int>(std::floor((p.y - origin_.y) / gsd_));
  return PixelIndex{std::min(col, pixels_.width - 1),
                    std::min(row, pixels_.height - 1)};
}

Vec2 RasterMap::pixel_to_world(PixelIndex px) const {
  return {origin_.x + (px.col + 0.5) * gsd_, origin_.y + (px.row + 0.5) * gsd_};
}

void CameraModel::validate() const {
  if (!(fov_deg > 0.0 && fov_deg < 180.0)) {
    throw std::invalid_argument("CameraModel: fov_deg must be in (0, 180)");
  }
  if (patch_px < 2) {
    throw std::invalid_argument("CameraModel: patch_px must be >= 2");
  }
}

double CameraModel::footprint_side(double altitude) const {
  return 2.0 * altitude * std::tan(fov_deg * std::numbers::pi / 360.0);
}

namespace {

// Bilinear sampling with 32.32 fixed-point coordinates and 16-bit weights.
// Caller guarantees every sample lies in [0, w - 2] x [0, h - 2].
void sample_interior(const std::uint8_t* px, int w, int n, double base_x,
                     double base_y, double du_x, double du_y, double dv_x,
                     double dv_y, std::uint8_t* out) {
  constexpr double kOne = 4294967296.0;
  const auto fix = [](double value) { return std::llround(value * kOne); };
  const std::int64_t sdu_x = fix(du_x), sdu_y = fix(du_y);
  for (int v = 0; v < n; ++v) {
    std::int64_t fx = fix(base_x + v * dv_x);
    std::int64_t fy = fix(base_y + v * dv_y);
    std::uint8_t* dst = out + static_cast<std::size_t>(v) * n;
    for (int u = 0; u < n; ++u, fx += sdu_x, fy += sdu_y) {
      const auto x0 = static_cast<std::size_t>(fx >> 32);
      const auto y0 = static_cast<std::size_t>(fy >> 32);
      const std::int64_t tx = (fx >> 16) & 0xFFFF;
      const std::int64_t ty = (fy >> 16) & 0xFFFF;
      const std::uint8_t* r0 = px + y0 * w + x0;
      const std::uint8_t* r1 = r0 + w;
      const std::int64_t top = (std::int64_t{r0[0]} << 16) + tx * (r0[1] - r0[0]);
      const std::int64_t bot = (std::int64_t{r1[0]} << 16) + tx * (r1[1] - r1[0]);
      const std::int64_t val = (top << 16) + ty * (bot - top);
      dst[u] = static_cast<std::uint8_t>((val + (std::int64_t{1} << 31)) >> 32);
    }
  }
}

}  // namespace

bool extract_patch_into(const RasterMap& map, const Pose2D& pose,
                        double altitude, const CameraModel& cam,
                        std::span<std::uint8_t> out) {
  if (!(altitude > 0.0)) {
    throw std::invalid_argument("extract_patch: altitude must be positive");
  }
  cam.validate();
  const int n = cam.patch_px;
  if (out.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("extract_patch: output buffer size mismatch");
  }

  const double side = cam.footprint_side(altitude);
  const double c = std::cos(pose.yaw);
  const double s = std::sin(pose.yaw);
  const double half = 0.5 * side;
  const std::array<Vec2, 4> corners = {Vec2{-half, -half}, Vec2{half, -half},
                                       Vec2{half, half}, Vec2{-half, half}};
  for (const auto& k : corners) {
    if (!map.contains({pose.x + c * k.x - s * k.y, pose.y + s * k.x + c * k.y})) {
      return false;
    }
  }

  // Patch cell (u, v) samples local offset (a, b) = ((u + 0.5) / n - 0.5) * side
  // along the heading and its left normal; the map coordinate is affine in u, v.
  const double inv_gsd = 1.0 / map.gsd();
  const double step = side / n;
  const double a0 = -half + 0.5 * step;
  const double cx = (pose.x - map.origin().x) * inv_gsd - 0.5;
  const double cy = (pose.y - map.origin().y) * inv_gsd - 0.5;
  const double du_x = c * step * inv_gsd, du_y = s * step * inv_gsd;
  const double dv_x = -s * step * inv_gsd, dv_y = c * step * inv_gsd;
  const double base_x = cx + (c * a0 - s * a0) * inv_gsd;
  const double base_y = cy + (s * a0 + c * a0) * inv_gsd;

  const Image8& img = map.pixels();
  const int w = img.width;
  const int h = img.height;
  const std::uint8_t* px = img.data.data();

  double lo_x = base_x, hi_x = base_x, lo_y = base_y, hi_y = base_y;
  for (const double ex : {0.0, n - 1.0}) {
    for (const double ey : {0.0, n - 1.0}) {
      const double x = base_x + ex * du_x + ey * dv_x;
      const double y = base_y + ex * du_y + ey * dv_y;
      lo_x = std::min(lo_x, x), hi_x = std::max(hi_x, x);
      lo_y = std::min(lo_y, y), hi_y = std::max(hi_y, y);
    }
  }
  constexpr double kMargin = 1e-6;
  if (lo_x >= kMargin && lo_y >= kMargin && hi_x <= w - 2 - kMargin &&
      hi_y <= h - 2 - kMargin) {
    sample_interior(px, w, n, base_x, base_y, du_x, du_y, dv_x, dv_y, out.data());
    return true;
  }

  for (int v = 0; v < n; ++v) {
    double fx = base_x + v * dv_x;
    double fy = base_y + v * dv_y;
    std::uint8_t* dst = out.data() + static_cast<std::size_t>(v) * n;
    for (int u = 0; u < n; ++u, fx += du_x, fy += du_y) {
      const double qx = std::clamp(fx, 0.0, static_cast<double>(w - 1));
      const double qy = std::clamp(fy, 0.0, static_cast<double>(h - 1));
      const int x0 = std::min(static_cast<int>(qx), w - 2 < 0 ? 0 : w - 2);
      const int y0 = std::min(static_cast<int>(qy), h - 2 < 0 ? 0 : h - 2);
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double tx = qx - x0;
      const double ty = qy - y0;
      const std::uint8_t* r0 = px + static_cast<std::size_t>(y0) * w;
      const std::uint8_t* r1 = px + static_cast<std::size_t>(y1) * w;
      const double top = r0[x0] + tx * (r0[x1] - r0[x0]);
      const double bot = r1[x0] + tx * (r1[x1] - r1[x0]);
      dst[u] = static_cast<std::uint8_t>(top + ty * (bot - top) + 0.5);
    }
  }
  return true;
}

std::optional<Image8> extract_patch(const RasterMap& map, const Pose2D& pose,
                                    double altitude, const CameraModel& cam) {
  cam.validate();
  Image8 patch(cam.patch_px, cam.patch_px, 1);
  if (!extract_patch_into(map, pose, altitude, cam, patch.data)) {
    return std::nullopt;
  }
  return patch;
}

}  // namespace aerloc
