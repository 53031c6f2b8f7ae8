#ifndef AERLOC_KERNELS_HPP_
#define AERLOC_KERNELS_HPP_

#include <span>

#include "aerloc/likelihood.hpp"
#include "aerloc/raster_map.hpp"
#include "aerloc/similarity.hpp"

namespace aerloc {

/// Immutable inputs shared by every particle evaluated against one frame.
struct EvaluationContext {
  const RasterMap& map;
  const FrameCorrelator& frame;
  double altitude;
  CameraModel camera;
  ConversionSpec conversion;
};

/// Likelihood of a single hypothesis; 0 when the footprint leaves the map or
/// either patch is flat. `scratch` must hold patch_px^2 bytes.
double evaluate_particle(const EvaluationContext& ctx, const Pose2D& pose,
                         std::span<std::uint8_t> scratch);

/// OpenMP-parallel batch evaluation. Output order matches `poses`; results
/// are independent of the thread count.
void evaluate_particles(const EvaluationContext& ctx, std::span<const Pose2D> poses,
                        std::span<double> likelihoods);

/// Single-threaded reference for evaluate_particles.
void evaluate_particles_serial(const EvaluationContext& ctx,
                               std::span<const Pose2D> poses,
                               std::span<double> likelihoods);

}  // namespace aerloc

#endif  // AERLOC_KERNELS_HPP_
