#ifndef AERLOC_SIM_HPP_
#define AERLOC_SIM_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

#include "aerloc/flight.hpp"
#include "aerloc/motion.hpp"
#include "aerloc/raster_map.hpp"

namespace aerloc {

enum class TerrainKind { fractal, urban_blocks };
std::string_view to_string(TerrainKind kind);
TerrainKind parse_terrain(std::string_view text);

struct WorldSpec {
  std::uint64_t seed = 1;
  int size_px = 1024;
  double gsd = 2.0;
  TerrainKind terrain = TerrainKind::fractal;
  int octaves = 6;
  double roughness = 0.8;   // amplitude ratio between successive octaves
  int base_period_px = 64;  // lattice period of the coarsest octave

  void validate() const;
};

/// Procedural square map with origin (0, 0) and full 0-255 range. Every
/// 64x64 tile is non-constant.
RasterMap generate_world(const WorldSpec& spec);

enum class FlightShape { line, rectangle, circle };
std::string_view to_string(FlightShape shape);
FlightShape parse_shape(std::string_view text);

struct FlightPlan {
  FlightShape shape = FlightShape::line;
  double altitude = 200.0;   // meters
  double speed = 25.0;       // m/s
  double frame_rate = 5.0;   // Hz
  /// Start position and initial heading. Rectangles start mid-way along
  /// their first side; circles and rectangles turn left.
  Pose2D start;
  double length = 1000.0;    // line length, or first rectangle side
  double width = 600.0;      // second rectangle side
  double radius = 300.0;     // circle radius
  CameraModel camera;

  void validate() const;
};

/// Start pose (heading +x) that centers the planned path on the map.
Pose2D centered_start(const FlightPlan& plan, const RasterMap& map);

/// Ground-truth poses sampled every speed / frame_rate meters of arc
/// length. Each yaw is the direction of travel into that frame (the first
/// frame takes the direction out of it). Odometry is left zero and images
/// empty. Throws std::invalid_argument when any pose is closer than one
/// footprint side to the map border.
FlightLog generate_flight(const FlightPlan& plan, const RasterMap& map);

/// extract_patch at the true pose plus N(0, sigma^2) pixel noise, rounded
/// and clamped. Throws std::invalid_argument when the footprint leaves the map.
Image8 render_frame(const RasterMap& map, const Pose2D& truth, double altitude,
                    const CameraModel& cam, double sensor_noise_sigma, Rng& rng);

/// Controlled stand-in for map change between capture dates.
struct AgeSpec {
  double level = 0.0;                // 0 leaves the map untouched
  std::uint64_t seed = 1;
  double change_fraction = 0.0;      // share of area overwritten by texture from elsewhere
  double occlusion_fraction = 0.0;   // share of area painted flat with the local mean
  double brightness_shift = 0.0;     // intensity levels
  double contrast_scale = 1.0;       // about mid-gray
  double blur_sigma_px = 0.0;

  /// Components scaled from a single level in [0, 1].
  static AgeSpec from_level(double level, std::uint64_t seed);
};

/// Copies texture from random places into random 16-96 px rectangles,
/// occludes 8-48 px rectangles with their local mean, blurs, then applies
/// brightness and contrast. Pure in (map, age).
RasterMap age_map(const RasterMap& map, const AgeSpec& age);

struct OdometryNoise {
  double sigma_tran = 0.05;  // meters per frame
  double sigma_rot = 0.002;  // radians per frame
};

/// Per-frame deltas between consecutive truth poses, translation scaled by
/// (1 + drift), both channels perturbed by zero-mean Gaussian noise. Entry 0
/// is zero motion. Requires at least 2 frames.
std::vector<OdometryDelta> synth_odometry(const FlightLog& flight, double drift,
                                          const OdometryNoise& noise, Rng& rng);

/// Full synthetic flight: trajectory, rendered frames and odometry. Frame and
/// odometry noise come from separate streams derived from `seed`.
FlightLog simulate_flight(const RasterMap& map, const FlightPlan& plan,
                          double sensor_noise_sigma, double drift,
                          const OdometryNoise& odo_noise, std::uint64_t seed);

/// SplitMix64 finalizer, used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t value);

}  // namespace aerloc

#endif  // AERLOC_SIM_HPP_
