#include "aerloc/kernels.hpp"

#include <omp.h>

#include <stdexcept>
#include <vector>

namespace aerloc {
namespace {

void check(const EvaluationContext& ctx, std::size_t poses, std::size_t out) {
  if (poses != out) throw std::invalid_argument("evaluate_particles: size mismatch");
  if (!(ctx.altitude > 0.0)) throw std::invalid_argument("evaluate_particles: altitude must be > 0");
  ctx.camera.validate();
  ctx.conversion.validate();
  const auto n = static_cast<std::size_t>(ctx.camera.patch_px);
  if (ctx.frame.size() != n * n) {
    throw std::invalid_argument("evaluate_particles: frame is not patch_px^2");
  }
}

}  // namespace

double evaluate_particle(const EvaluationContext& ctx, const Pose2D& pose,
                         std::span<std::uint8_t> scratch) {
  if (!extract_patch_into(ctx.map, pose, ctx.altitude, ctx.camera, scratch)) {
    return 0.0;
  }
  const auto r = ctx.frame.correlate(scratch);
  return r ? convert(ctx.conversion, *r) : 0.0;
}

void evaluate_particles(const EvaluationContext& ctx, std::span<const Pose2D> poses,
                        std::span<double> likelihoods) {
  check(ctx, poses.size(), likelihoods.size());
  const auto count = static_cast<std::ptrdiff_t>(poses.size());
  const auto patch_bytes = static_cast<std::size_t>(ctx.camera.patch_px) * ctx.camera.patch_px;
#pragma omp parallel if (count > 1)
  {
    std::vector<std::uint8_t> scratch(patch_bytes);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      likelihoods[i] = evaluate_particle(ctx, poses[i], scratch);
    }
  }
}

void evaluate_particles_serial(const EvaluationContext& ctx,
                               std::span<const Pose2D> poses,
                               std::span<double> likelihoods) {
  check(ctx, poses.size(), likelihoods.size());
  std::vector<std::uint8_t> scratch(static_cast<std::size_t>(ctx.camera.patch_px) *
                                    ctx.camera.patch_px);
  for (std::size_t i = 0; i < poses.size(); ++i) {
    likelihoods[i] = evaluate_particle(ctx, poses[i], scratch);
  }
}

}  // namespace aerloc
