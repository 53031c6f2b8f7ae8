#include "aerloc/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "aerloc/text_io.hpp"

namespace aerloc {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

std::string lowercase_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (auto& ch : ext) ch = static_cast<char>(std::tolower(ch));
  return ext;
}

}  // namespace

Image8 read_png(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  Image8 image;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("malformed PNG: " + path.string());
  }
  png_init_io(png, file.get());
  png_read_info(png, info);

  const png_byte color = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS)) {
    png_set_strip_alpha(png);
  }
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const int channels = png_get_channels(png, info);
  image = Image8(width, height, channels);
  rows.resize(height);
  for (int r = 0; r < height; ++r) {
    rows[r] = image.data.data() + static_cast<std::size_t>(r) * width * channels;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

void write_png(const std::filesystem::path& path, const Image8& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw std::invalid_argument("write_png: 1 or 3 channels required");
  }
  FilePtr file = open_file(path, "wb");
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  std::vector<png_bytep> rows(image.height);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed writing PNG: " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, image.width, image.height, 8,
               image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < image.height; ++r) {
    rows[r] = const_cast<png_bytep>(image.data.data()) +
              static_cast<std::size_t>(r) * image.width * image.channels;
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

Image8 read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  auto next_token = [&in, &path]() {
    std::string tok;
    while (in) {
      int ch = in.peek();
      if (ch == '#') {
        std::string skip;
        std::getline(in, skip);
      } else if (std::isspace(ch)) {
        in.get();
      } else {
        break;
      }
    }
    in >> tok;
    if (tok.empty()) throw IoError("truncated PGM header: " + path.string());
    return tok;
  };
  if (next_token() != "P5") throw IoError("not a binary PGM: " + path.string());
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(next_token());
    height = std::stoi(next_token());
    maxval = std::stoi(next_token());
  } catch (const std::logic_error&) {
    throw IoError("malformed PGM header: " + path.string());
  }
  if (width < 1 || height < 1 || maxval < 1 || maxval > 255) {
    throw IoError("unsupported PGM geometry: " + path.string());
  }
  in.get();  // single whitespace before the raster
  Image8 image(width, height, 1);
  in.read(reinterpret_cast<char*>(image.data.data()),
          static_cast<std::streamsize>(image.data.size()));
  if (in.gcount() != static_cast<std::streamsize>(image.data.size())) {
    throw IoError("truncated PGM raster: " + path.string());
  }
  return image;
}

void write_pgm(const std::filesystem::path& path, const Image8& image) {
  if (image.channels != 1) throw std::invalid_argument("write_pgm: gray only");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.data.data()),
            static_cast<std::streamsize>(image.data.size()));
}

Image8 read_gray_image(const std::filesystem::path& path) {
  const std::string ext = lowercase_extension(path);
  if (ext == ".png") return to_grayscale(read_png(path));
  if (ext == ".pgm") return read_pgm(path);
  throw IoError("unsupported raster container: " + path.string());
}

void write_image(const std::filesystem::path& path, const Image8& image) {
  const std::string ext = lowercase_extension(path);
  if (ext == ".png") return write_png(path, image);
  if (ext == ".pgm") return write_pgm(path, image);
  throw IoError("unsupported raster container: " + path.string());
}

std::filesystem::path map_sidecar_path(const std::filesystem::path& raster) {
  std::filesystem::path p = raster;
  p.replace_extension(".meta");
  return p;
}

RasterMap load_map(const std::filesystem::path& raster) {
  const auto meta = read_key_values(map_sidecar_path(raster));
  return RasterMap(read_gray_image(raster),
                   require_number(meta, "gsd_m_per_px"),
                   Vec2{require_number(meta, "origin_x_m"),
                        require_number(meta, "origin_y_m")});
}

void save_map(const std::filesystem::path& raster, const RasterMap& map) {
  write_image(raster, map.pixels());
  write_key_values(map_sidecar_path(raster),
                   {{"gsd_m_per_px", format_double(map.gsd())},
                    {"origin_x_m", format_double(map.origin().x)},
                    {"origin_y_m", format_double(map.origin().y)}});
}

}  // namespace aerloc
