#ifndef AERLOC_FLIGHT_IO_HPP_
#define AERLOC_FLIGHT_IO_HPP_

#include <filesystem>

#include "aerloc/flight.hpp"

namespace aerloc {

/// Flight directory layout:
///   frames/NNNNNN.png   camera patches, six-digit zero-padded frame index
///   truth.csv           frame,t_sec,x_m,y_m,yaw_rad,altitude_m
///   odometry.csv        frame,d_tran_m,d_rot_rad (motion since previous frame)
///   meta.txt            fov_deg, patch_px, frame_rate_hz, map
void write_flight(const std::filesystem::path& dir, const FlightLog& flight);
FlightLog read_flight(const std::filesystem::path& dir);

/// Map raster path referenced by a flight directory's meta.txt.
std::filesystem::path flight_map_path(const std::filesystem::path& dir,
                                      const FlightLog& flight);

}  // namespace aerloc

#endif  // AERLOC_FLIGHT_IO_HPP_
