#include "aerloc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace aerloc {
namespace {

double lattice_value(std::uint64_t seed, int octave, std::int64_t ix, std::int64_t iy) {
  std::uint64_t h = mix_seed(seed ^ (static_cast<std::uint64_t>(octave) * 0x9e3779b97f4a7c15ULL));
  h = mix_seed(h ^ static_cast<std::uint64_t>(ix) * 0xc2b2ae3d27d4eb4fULL);
  h = mix_seed(h ^ static_cast<std::uint64_t>(iy) * 0x165667b19e3779f9ULL);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

std::vector<double> fractal_field(const WorldSpec& spec, std::uint64_t seed) {
  const int n = spec.size_px;
  std::vector<double> field(static_cast<std::size_t>(n) * n, 0.0);
  double amplitude = 1.0;
  for (int o = 0; o < spec.octaves; ++o) {
    const double period = std::max(1.0, spec.base_period_px / std::pow(2.0, o));
    for (int row = 0; row < n; ++row) {
      const double fy = row / period;
      const auto iy = static_cast<std::int64_t>(std::floor(fy));
      const double ty = smoothstep(fy - iy);
      for (int col = 0; col < n; ++col) {
        const double fx = col / period;
        const auto ix = static_cast<std::int64_t>(std::floor(fx));
        const double tx = smoothstep(fx - ix);
        const double v00 = lattice_value(seed, o, ix, iy);
        const double v10 = lattice_value(seed, o, ix + 1, iy);
        const double v01 = lattice_value(seed, o, ix, iy + 1);
        const double v11 = lattice_value(seed, o, ix + 1, iy + 1);
        const double top = v00 + tx * (v10 - v00);
        const double bot = v01 + tx * (v11 - v01);
        field[static_cast<std::size_t>(row) * n + col] += amplitude * (top + ty * (bot - top));
      }
    }
    amplitude *= spec.roughness;
  }
  return field;
}

Image8 quantize_full_range(const std::vector<double>& field, int n) {
  const auto [lo, hi] = std::minmax_element(field.begin(), field.end());
  const double span = *hi - *lo;
  Image8 img(n, n, 1);
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double v = span > 0.0 ? (field[i] - *lo) / span : 0.0;
    img.data[i] = static_cast<std::uint8_t>(std::lround(255.0 * v));
  }
  return img;
}

// Street grid with blocks split into flat-roofed lots.
Image8 urban_blocks(const WorldSpec& spec, std::uint64_t seed) {
  const int n = spec.size_px;
  Rng rng(seed);
  std::uniform_int_distribution<int> block_size(24, 60);
  std::uniform_int_distribution<int> street_width(3, 6);
  std::uniform_int_distribution<int> lot_size(8, 22);
  std::uniform_int_distribution<int> roof(90, 255);
  std::uniform_int_distribution<int> street(35, 75);

  auto cuts = [&](int limit) {
    std::vector<std::pair<int, int>> spans;  // [begin, end) of blocks
    int pos = 0;
    while (pos < limit) {
      const int w = street_width(rng);
      const int b = block_size(rng);
      spans.emplace_back(std::min(pos + w, limit), std::min(pos + w + b, limit));
      pos += w + b;
    }
    return spans;
  };

  Image8 img(n, n, 1, static_cast<std::uint8_t>(street(rng)));
  const auto cols = cuts(n);
  const auto rows = cuts(n);
  for (const auto& [y0, y1] : rows) {
    for (const auto& [x0, x1] : cols) {
      for (int ly = y0; ly < y1;) {
        const int ly1 = std::min(y1, ly + lot_size(rng));
        for (int lx = x0; lx < x1;) {
          const int lx1 = std::min(x1, lx + lot_size(rng));
          const auto value = static_cast<std::uint8_t>(roof(rng));
          for (int y = ly; y < ly1; ++y) {
            for (int x = lx; x < lx1; ++x) img.at(x, y) = value;
          }
          lx = lx1;
        }
        ly = ly1;
      }
    }
  }
  return img;
}

bool tiles_non_constant(const Image8& img, int tile) {
  for (int ty = 0; ty < img.height; ty += tile) {
    for (int tx = 0; tx < img.width; tx += tile) {
      const std::uint8_t first = img.at(tx, ty);
      bool varied = false;
      for (int y = ty; y < std::min(img.height, ty + tile) && !varied; ++y) {
        for (int x = tx; x < std::min(img.width, tx + tile); ++x) {
          if (img.at(x, y) != first) {
            varied = true;
            break;
          }
        }
      }
      if (!varied) return false;
    }
  }
  return true;
}

// Separable Gaussian blur with clamped borders.
void gaussian_blur(Image8& img, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    total += kernel[i + radius];
  }
  for (auto& k : kernel) k /= total;
  const int w = img.width, h = img.height;
  std::vector<double> tmp(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[i + radius] * img.at(std::clamp(x + i, 0, w - 1), y);
      }
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[i + radius] * tmp[static_cast<std::size_t>(std::clamp(y + i, 0, h - 1)) * w + x];
      }
      img.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
    }
  }
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t value) {
  std::uint64_t z = value + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string_view to_string(TerrainKind kind) {
  return kind == TerrainKind::fractal ? "fractal" : "urban_blocks";
}

TerrainKind parse_terrain(std::string_view text) {
  if (text == "fractal") return TerrainKind::fractal;
  if (text == "urban_blocks" || text == "urban") return TerrainKind::urban_blocks;
  throw std::invalid_argument("unknown terrain kind '" + std::string(text) + "'");
}

std::string_view to_string(FlightShape shape) {
  switch (shape) {
    case FlightShape::line: return "line";
    case FlightShape::rectangle: return "rectangle";
    case FlightShape::circle: return "circle";
  }
  return "unknown";
}

FlightShape parse_shape(std::string_view text) {
  if (text == "line") return FlightShape::line;
  if (text == "rectangle") return FlightShape::rectangle;
  if (text == "circle") return FlightShape::circle;
  throw std::invalid_argument("unknown flight shape '" + std::string(text) + "'");
}

void WorldSpec::validate() const {
  if (size_px < 256) throw std::invalid_argument("WorldSpec: size_px must be >= 256");
  if (!(gsd > 0.0)) throw std::invalid_argument("WorldSpec: gsd must be > 0");
  if (octaves < 1) throw std::invalid_argument("WorldSpec: octaves must be >= 1");
  if (!(roughness > 0.0)) throw std::invalid_argument("WorldSpec: roughness must be > 0");
  if (base_period_px < 2) throw std::invalid_argument("WorldSpec: base_period_px must be >= 2");
}

RasterMap generate_world(const WorldSpec& spec) {
  spec.validate();
  constexpr int kTile = 64;
  constexpr int kAttempts = 16;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const std::uint64_t seed = mix_seed(spec.seed + static_cast<std::uint64_t>(attempt));
    Image8 img = spec.terrain == TerrainKind::fractal
                     ? quantize_full_range(fractal_field(spec, seed), spec.size_px)
                     : urban_blocks(spec, seed);
    if (tiles_non_constant(img, kTile)) return RasterMap(std::move(img), spec.gsd, {0.0, 0.0});
  }
  throw std::invalid_argument("generate_world: could not produce textured tiles");
}

void FlightPlan::validate() const {
  camera.validate();
  if (!(altitude > 0.0)) throw std::invalid_argument("FlightPlan: altitude must be > 0");
  if (!(speed > 0.0)) throw std::invalid_argument("FlightPlan: speed must be > 0");
  if (!(frame_rate > 0.0)) throw std::invalid_argument("FlightPlan: frame_rate must be > 0");
  if (!(length > 0.0)) throw std::invalid_argument("FlightPlan: length must be > 0");
  if (shape == FlightShape::rectangle && !(width > 0.0)) {
    throw std::invalid_argument("FlightPlan: width must be > 0");
  }
  if (shape == FlightShape::circle && !(radius > 0.0)) {
    throw std::invalid_argument("FlightPlan: radius must be > 0");
  }
}

Pose2D centered_start(const FlightPlan& plan, const RasterMap& map) {
  const double cx = map.origin().x + 0.5 * map.extent_x();
  const double cy = map.origin().y + 0.5 * map.extent_y();
  switch (plan.shape) {
    case FlightShape::line: return {cx - 0.5 * plan.length, cy, 0.0};
    case FlightShape::rectangle: return {cx, cy - 0.5 * plan.width, 0.0};
    case FlightShape::circle: return {cx, cy - plan.radius, 0.0};
  }
  return {cx, cy, 0.0};
}

FlightLog generate_flight(const FlightPlan& plan, const RasterMap& map) {
  plan.validate();
  const double step = plan.speed / plan.frame_rate;
  const double c = std::cos(plan.start.yaw);
  const double s = std::sin(plan.start.yaw);
  // Path position as a function of arc length, in a frame aligned with the start.
  double total = plan.length;
  std::function<Vec2(double)> along;
  switch (plan.shape) {
    case FlightShape::line:
      along = [](double d) { return Vec2{d, 0.0}; };
      break;
    case FlightShape::circle: {
      total = 2.0 * std::numbers::pi * plan.radius;
      const double r = plan.radius;
      along = [r](double d) {
        const double a = d / r;
        return Vec2{r * std::sin(a), r * (1.0 - std::cos(a))};
      };
      break;
    }
    case FlightShape::rectangle: {
      const double l = plan.length, w = plan.width;
      total = 2.0 * (l + w);
      along = [l, w](double d) {
        // Start mid-way along the first side, counter-clockwise.
        const double half = 0.5 * l;
        if (d <= half) return Vec2{d, 0.0};
        d -= half;
        if (d <= w) return Vec2{half, d};
        d -= w;
        if (d <= l) return Vec2{half - d, w};
        d -= l;
        if (d <= w) return Vec2{-half, w - d};
        d -= w;
        return Vec2{-half + d, 0.0};
      };
      break;
    }
  }

  const auto frames = static_cast<std::size_t>(std::floor(total / step + 1e-9)) + 1;
  std::vector<Vec2> points(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    const Vec2 local = along(static_cast<double>(t) * step);
    points[t] = {plan.start.x + c * local.x - s * local.y,
                 plan.start.y + s * local.x + c * local.y};
  }

  FlightLog log;
  log.camera = plan.camera;
  log.frame_rate_hz = plan.frame_rate;
  log.frames.resize(frames);
  const double margin = plan.camera.footprint_side(plan.altitude);
  for (std::size_t t = 0; t < frames; ++t) {
    const Vec2 p = points[t];
    double yaw = plan.start.yaw;
    if (t > 0) {
      yaw = std::atan2(p.y - points[t - 1].y, p.x - points[t - 1].x);
    } else if (frames > 1) {
      yaw = std::atan2(points[1].y - p.y, points[1].x - p.x);
    }
    const Vec2 o = map.origin();
    if (p.x - o.x < margin || p.y - o.y < margin || o.x + map.extent_x() - p.x < margin ||
        o.y + map.extent_y() - p.y < margin) {
      throw std::invalid_argument("generate_flight: trajectory leaves the map margin at frame " +
                                  std::to_string(t));
    }
    FlightFrame& f = log.frames[t];
    f.t_sec = static_cast<double>(t) / plan.frame_rate;
    f.truth = {p.x, p.y, normalize_angle(yaw)};
    f.altitude = plan.altitude;
  }
  return log;
}

Image8 render_frame(const RasterMap& map, const Pose2D& truth, double altitude,
                    const CameraModel& cam, double sensor_noise_sigma, Rng& rng) {
  auto patch = extract_patch(map, truth, altitude, cam);
  if (!patch) throw std::invalid_argument("render_frame: footprint leaves the map");
  if (sensor_noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, sensor_noise_sigma);
    for (auto& px : patch->data) {
      px = static_cast<std::uint8_t>(std::clamp(std::lround(px + noise(rng)), 0L, 255L));
    }
  }
  return *std::move(patch);
}

namespace {

// Repaints random rectangles until `fraction` of the pixels are covered,
// either with texture copied from another random place or with the mean of
// the covered area.
void repaint_rectangles(Image8& out, const Image8& src, double fraction, int min_side,
                        int max_side, bool copy_texture, Rng& rng) {
  const int w = src.width, h = src.height;
  std::uniform_int_distribution<int> side(min_side, max_side);
  std::vector<std::uint8_t> covered(src.data.size(), 0);
  const auto target = static_cast<std::size_t>(fraction * static_cast<double>(src.data.size()));
  std::size_t count = 0;
  while (count < target) {
    const int rw = std::min(side(rng), w);
    const int rh = std::min(side(rng), h);
    const int x0 = std::uniform_int_distribution<int>(0, w - rw)(rng);
    const int y0 = std::uniform_int_distribution<int>(0, h - rh)(rng);
    int sx0 = x0, sy0 = y0;
    std::uint8_t fill = 0;
    if (copy_texture) {
      sx0 = std::uniform_int_distribution<int>(0, w - rw)(rng);
      sy0 = std::uniform_int_distribution<int>(0, h - rh)(rng);
    } else {
      double mean = 0.0;
      for (int y = y0; y < y0 + rh; ++y) {
        for (int x = x0; x < x0 + rw; ++x) mean += src.at(x, y);
      }
      fill = static_cast<std::uint8_t>(std::lround(mean / (rw * rh)));
    }
    for (int y = y0; y < y0 + rh; ++y) {
      for (int x = x0; x < x0 + rw; ++x) {
        out.at(x, y) = copy_texture ? src.at(sx0 + x - x0, sy0 + y - y0) : fill;
        auto& c = covered[static_cast<std::size_t>(y) * w + x];
        count += c == 0 ? 1 : 0;
        c = 1;
      }
    }
  }
}

}  // namespace

AgeSpec AgeSpec::from_level(double level, std::uint64_t seed) {
  if (!(level >= 0.0 && level <= 1.0)) {
    throw std::invalid_argument("AgeSpec: level must be in [0, 1]");
  }
  AgeSpec age;
  age.level = level;
  age.seed = seed;
  age.change_fraction = 0.6 * level;
  age.brightness_shift = 30.0 * level;
  age.contrast_scale = 1.0 - 0.4 * level;
  age.blur_sigma_px = 1.5 * level;
  return age;
}

RasterMap age_map(const RasterMap& map, const AgeSpec& age) {
  if (age.level == 0.0) return map;
  if (!(age.occlusion_fraction >= 0.0 && age.occlusion_fraction <= 1.0)) {
    throw std::invalid_argument("age_map: occlusion_fraction must be in [0, 1]");
  }
  if (!(age.change_fraction >= 0.0 && age.change_fraction <= 1.0)) {
    throw std::invalid_argument("age_map: change_fraction must be in [0, 1]");
  }
  const Image8& src = map.pixels();
  Image8 out = src;

  if (age.change_fraction > 0.0) {
    Rng rng(mix_seed(age.seed));
    repaint_rectangles(out, src, age.change_fraction, 16, 96, true, rng);
  }
  if (age.occlusion_fraction > 0.0) {
    Rng rng(mix_seed(age.seed ^ 0x6f63636c75646564ULL));
    repaint_rectangles(out, src, age.occlusion_fraction, 8, 48, false, rng);
  }
  if (age.blur_sigma_px > 0.0) gaussian_blur(out, age.blur_sigma_px);
  if (age.brightness_shift != 0.0 || age.contrast_scale != 1.0) {
    for (auto& px : out.data) {
      const double v = (px - 128.0) * age.contrast_scale + 128.0 + age.brightness_shift;
      px = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return RasterMap(std::move(out), map.gsd(), map.origin());
}

std::vector<OdometryDelta> synth_odometry(const FlightLog& flight, double drift,
                                          const OdometryNoise& noise, Rng& rng) {
  if (flight.frames.size() < 2) throw std::invalid_argument("synth_odometry: need >= 2 frames");
  std::vector<OdometryDelta> out(flight.frames.size());
  std::normal_distribution<double> unit(0.0, 1.0);
  for (std::size_t t = 1; t < flight.frames.size(); ++t) {
    const Pose2D& a = flight.frames[t - 1].truth;
    const Pose2D& b = flight.frames[t].truth;
    double tran = std::hypot(b.x - a.x, b.y - a.y) * (1.0 + drift);
    double rot = normalize_angle(b.yaw - a.yaw);
    if (noise.sigma_tran > 0.0) tran += noise.sigma_tran * unit(rng);
    if (noise.sigma_rot > 0.0) rot += noise.sigma_rot * unit(rng);
    out[t] = {std::max(tran, 0.0), rot};
  }
  return out;
}

FlightLog simulate_flight(const RasterMap& map, const FlightPlan& plan,
                          double sensor_noise_sigma, double drift,
                          const OdometryNoise& odo_noise, std::uint64_t seed) {
  FlightLog log = generate_flight(plan, map);
  Rng render_rng(mix_seed(seed ^ 0x72656e646572ULL));
  for (auto& f : log.frames) {
    f.image = render_frame(map, f.truth, f.altitude, log.camera, sensor_noise_sigma, render_rng);
  }
  if (log.frames.size() >= 2) {
    Rng odo_rng(mix_seed(seed ^ 0x6f646f6dULL));
    const auto odo = synth_odometry(log, drift, odo_noise, odo_rng);
    for (std::size_t t = 0; t < log.frames.size(); ++t) log.frames[t].odometry = odo[t];
  }
  return log;
}

}  // namespace aerloc
