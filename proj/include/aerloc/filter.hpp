#ifndef AERLOC_FILTER_HPP_
#define AERLOC_FILTER_HPP_

#include <cstdint>
#include <vector>

#include "aerloc/flight.hpp"
#include "aerloc/kld_sampler.hpp"
#include "aerloc/likelihood.hpp"
#include "aerloc/motion.hpp"
#include "aerloc/raster_map.hpp"
#include "aerloc/report.hpp"

namespace aerloc {

struct Particle {
  Pose2D pose;
  double likelihood = 1.0;
  double weight = 0.0;
};

struct ParticleSet {
  std::vector<Particle> particles;
  std::size_t generation = 0;
  bool degenerate = false;
};

struct PoseEstimate {
  Pose2D pose;
  std::size_t n_evaluated = 0;
  std::size_t k_bins = 0;
  bool degenerate = false;
};

/// How particle headings are fused into the estimate.
enum class HeadingFusion {
  circular,    // atan2 of weighted sine and cosine sums
  weighted_sum // plain weighted sum of yaw values; breaks across the +-pi seam
};

struct FilterConfig {
  KldConfig kld;
  NoiseConfig noise;
  double init_radius = 300.0;          // meters
  std::size_t init_particles = 10000;
  double eps_rot_init = 0.05;          // radians, through sample_normal
  /// Minimum number of hypotheses drawn and evaluated between bound checks.
  /// 1 reproduces the strictly sequential loop.
  std::size_t batch_size = 64;
  HeadingFusion heading = HeadingFusion::circular;
  /// Use the OpenMP kernel for evaluation; false runs the serial reference.
  bool parallel = true;

  void validate() const;
};

/// n0 particles area-uniform over the disc of `radius` around `start`
/// (r = radius * sqrt(u)), yaw = start.yaw + sample_normal(eps_rot_init),
/// likelihood 1 and uniform weights.
ParticleSet init_particles(const Pose2D& start, double radius, std::size_t n0,
                           double eps_rot_init, Rng& rng);

/// Weighted mean pose of a normalized set.
Pose2D weighted_mean_pose(const ParticleSet& set, HeadingFusion heading);

struct StepResult {
  ParticleSet set;
  PoseEstimate estimate;
};

/// One filter iteration for one camera frame: draw from `prev` by weight,
/// propagate with the odometry, score against the map, stop on the KLD
/// bound, normalize and estimate.
StepResult step(const ParticleSet& prev, const Image8& frame,
                const OdometryDelta& odo, double altitude, const RasterMap& map,
                const CameraModel& camera, const ConversionSpec& conversion,
                const FilterConfig& cfg, Rng& rng);

/// Runs the filter over every frame of a flight. Deterministic for a seed.
/// Throws ConfigError when the flight does not lie on the map.
RunReport run_flight(const FlightLog& flight, const RasterMap& map,
                     const ConversionSpec& conversion, const FilterConfig& cfg,
                     std::uint64_t seed);

}  // namespace aerloc

#endif  // AERLOC_FILTER_HPP_
