#ifndef AERLOC_IMAGE_IO_HPP_
#define AERLOC_IMAGE_IO_HPP_

#include <filesystem>

#include "aerloc/errors.hpp"
#include "aerloc/raster_map.hpp"

namespace aerloc {

/// Reads an 8-bit gray, gray+alpha, RGB or RGBA PNG. Alpha is dropped.
Image8 read_png(const std::filesystem::path& path);
/// Writes a 1- or 3-channel image as 8-bit PNG.
void write_png(const std::filesystem::path& path, const Image8& image);

/// Binary P5 with maxval <= 255.
Image8 read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Image8& image);

/// Dispatches on extension (.png, .pgm); color input is converted to gray.
Image8 read_gray_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const Image8& image);

/// Sidecar path for a map raster: same stem, ".meta" extension.
std::filesystem::path map_sidecar_path(const std::filesystem::path& raster);

/// Loads a raster plus its `key=value` sidecar (gsd_m_per_px, origin_x_m,
/// origin_y_m).
RasterMap load_map(const std::filesystem::path& raster);
void save_map(const std::filesystem::path& raster, const RasterMap& map);

}  // namespace aerloc

#endif  // AERLOC_IMAGE_IO_HPP_
