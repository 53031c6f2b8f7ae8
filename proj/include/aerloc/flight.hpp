#ifndef AERLOC_FLIGHT_HPP_
#define AERLOC_FLIGHT_HPP_

#include <string>
#include <vector>

#include "aerloc/motion.hpp"
#include "aerloc/raster_map.hpp"

namespace aerloc {

struct FlightFrame {
  double t_sec = 0.0;
  Pose2D truth;
  double altitude = 0.0;
  /// Motion measured since the previous frame; zero for the first frame.
  OdometryDelta odometry;
  /// Camera patch (patch_px x patch_px gray); may be empty before rendering.
  Image8 image;
};

struct FlightLog {
  CameraModel camera;
  double frame_rate_hz = 5.0;
  /// Map raster reference, relative to the flight directory when on disk.
  std::string map_ref;
  std::vector<FlightFrame> frames;
};

/// Integrates the odometry column from the first ground-truth pose with the
/// noiseless motion model.
std::vector<Pose2D> dead_reckoning(const FlightLog& flight);

}  // namespace aerloc

#endif  // AERLOC_FLIGHT_HPP_
