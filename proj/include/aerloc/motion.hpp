#ifndef AERLOC_MOTION_HPP_
#define AERLOC_MOTION_HPP_

#include <random>

#include "aerloc/raster_map.hpp"

namespace aerloc {

using Rng = std::mt19937_64;

struct OdometryDelta {
  double d_tran = 0.0;  // meters since the previous frame
  double d_rot = 0.0;   // radians of heading change since the previous frame
};

/// Motion noise. The translational bound grows with the distance moved:
/// eps_tran = eps_tran_scale * d_tran + eps_tran_min.
struct NoiseConfig {
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double alpha3 = 1.0;
  double eps_tran_scale = 0.6;
  double eps_tran_min = 1.0;
  double eps_rot = 0.02;

  void validate() const;
  double eps_tran(double d_tran) const { return eps_tran_scale * d_tran + eps_tran_min; }
};

/// eps * g with g ~ N(0, sigma = 1/3), so +-3 sigma spans +-eps.
double sample_normal(double eps, Rng& rng);

/// Planar odometry motion model:
///   tran = d_tran + sample_normal(eps_tran), rot = d_rot + sample_normal(eps_rot)
///   x' = x + a1 * tran * cos(yaw + a3 * rot)
///   y' = y + a2 * tran * sin(yaw + a3 * rot)
///   yaw' = yaw + a3 * rot
Pose2D propagate(const Pose2D& pose, const OdometryDelta& odo,
                 const NoiseConfig& noise, Rng& rng);

}  // namespace aerloc

#endif  // AERLOC_MOTION_HPP_
