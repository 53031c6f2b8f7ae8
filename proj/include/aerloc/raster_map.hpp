#ifndef AERLOC_RASTER_MAP_HPP_
#define AERLOC_RASTER_MAP_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace aerloc {

/// Wraps an angle into (-pi, pi].
double normalize_angle(double radians);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Planar pose in map meters; x east, y north, yaw counter-clockwise from +x.
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  friend bool operator==(const Pose2D&, const Pose2D&) = default;
};

struct PixelIndex {
  int col = 0;
  int row = 0;
  friend bool operator==(const PixelIndex&, const PixelIndex&) = default;
};

/// Row-major 8-bit raster with interleaved channels.
struct Image8 {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> data;

  Image8() = default;
  Image8(int w, int h, int c = 1, std::uint8_t fill = 0);

  std::uint8_t& at(int col, int row, int ch = 0) {
    return data[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }
  std::uint8_t at(int col, int row, int ch = 0) const {
    return data[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }
  std::span<const std::uint8_t> view() const { return data; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }

  friend bool operator==(const Image8&, const Image8&) = default;
};

/// Converts a 3-channel (RGB) raster to luma with BT.601 weights.
/// A 1-channel input is returned unchanged; any other channel count throws.
Image8 to_grayscale(const Image8& color);

/// Georeferenced single-channel raster. Pixel (col, row) covers the world
/// square [origin + (col, row) * gsd, origin + (col + 1, row + 1) * gsd).
/// Rows therefore grow with world y.
class RasterMap {
 public:
  RasterMap(Image8 pixels, double gsd, Vec2 origin);

  int width_px() const { return pixels_.width; }
  int height_px() const { return pixels_.height; }
  double gsd() const { return gsd_; }
  Vec2 origin() const { return origin_; }
  const Image8& pixels() const { return pixels_; }
  double extent_x() const { return pixels_.width * gsd_; }
  double extent_y() const { return pixels_.height * gsd_; }

  bool contains(Vec2 p) const;
  std::optional<PixelIndex> world_to_pixel(Vec2 p) const;
  Vec2 pixel_to_world(PixelIndex px) const;

 private:
  Image8 pixels_;
  double gsd_;
  Vec2 origin_;
};

/// Downward pinhole camera at nadir.
struct CameraModel {
  double fov_deg = 60.0;
  int patch_px = 64;

  void validate() const;
  /// Side of the square ground footprint in meters.
  double footprint_side(double altitude) const;
};

/// Samples the map under the camera footprint at `pose` into `out`
/// (patch_px * patch_px, row-major). Returns false without touching `out`
/// when any footprint corner leaves the map. Interior samples use fixed-point
/// arithmetic and may differ from exact bilinear rounding by one level.
bool extract_patch_into(const RasterMap& map, const Pose2D& pose,
                        double altitude, const CameraModel& cam,
                        std::span<std::uint8_t> out);

std::optional<Image8> extract_patch(const RasterMap& map, const Pose2D& pose,
                                    double altitude, const CameraModel& cam);

}  // namespace aerloc

#endif  // AERLOC_RASTER_MAP_HPP_
