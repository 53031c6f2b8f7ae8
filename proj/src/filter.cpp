#include "aerloc/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aerloc/errors.hpp"
#include "aerloc/kernels.hpp"
#include "aerloc/similarity.hpp"

namespace aerloc {

void FilterConfig::validate() const {
  kld.validate();
  noise.validate();
  if (!(init_radius > 0.0)) throw std::invalid_argument("FilterConfig: init_radius must be > 0");
  if (init_particles < 1) throw std::invalid_argument("FilterConfig: init_particles must be >= 1");
  if (!(eps_rot_init >= 0.0)) throw std::invalid_argument("FilterConfig: eps_rot_init must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("FilterConfig: batch_size must be >= 1");
}

ParticleSet init_particles(const Pose2D& start, double radius, std::size_t n0,
                           double eps_rot_init, Rng& rng) {
  if (!(radius > 0.0)) throw std::invalid_argument("init_particles: radius must be > 0");
  if (n0 < 1) throw std::invalid_argument("init_particles: n0 must be >= 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ParticleSet set;
  set.particles.reserve(n0);
  const double w = 1.0 / static_cast<double>(n0);
  for (std::size_t i = 0; i < n0; ++i) {
    const double r = radius * std::sqrt(unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    const Pose2D pose{start.x + r * std::cos(phi), start.y + r * std::sin(phi),
                      normalize_angle(start.yaw + sample_normal(eps_rot_init, rng))};
    set.particles.push_back({pose, 1.0, w});
  }
  return set;
}

Pose2D weighted_mean_pose(const ParticleSet& set, HeadingFusion heading) {
  if (set.particles.empty()) throw std::invalid_argument("weighted_mean_pose: empty set");
  double total = 0.0;
  for (const auto& p : set.particles) total += p.weight;
  const bool uniform = !(total > 0.0);
  const double uniform_w = 1.0 / static_cast<double>(set.particles.size());

  double x = 0.0, y = 0.0, s = 0.0, c = 0.0, yaw_sum = 0.0;
  for (const auto& p : set.particles) {
    const double b = uniform ? uniform_w : p.weight / total;
    x += b * p.pose.x;
    y += b * p.pose.y;
    s += b * std::sin(p.pose.yaw);
    c += b * std::cos(p.pose.yaw);
    yaw_sum += b * p.pose.yaw;
  }
  const double yaw = heading == HeadingFusion::circular ? std::atan2(s, c) : yaw_sum;
  return {x, y, normalize_angle(yaw)};
}

StepResult step(const ParticleSet& prev, const Image8& frame,
                const OdometryDelta& odo, double altitude, const RasterMap& map,
                const CameraModel& camera, const ConversionSpec& conversion,
                const FilterConfig& cfg, Rng& rng) {
  cfg.validate();
  camera.validate();
  conversion.validate();
  if (prev.particles.empty()) throw std::invalid_argument("step: empty particle set");
  if (frame.width != camera.patch_px || frame.height != camera.patch_px ||
      frame.channels != 1) {
    throw std::invalid_argument("step: frame must be patch_px x patch_px gray");
  }

  std::vector<double> prev_weights;
  prev_weights.reserve(prev.particles.size());
  for (const auto& p : prev.particles) prev_weights.push_back(p.weight);
  if (!std::any_of(prev_weights.begin(), prev_weights.end(),
                   [](double w) { return w > 0.0; })) {
    std::fill(prev_weights.begin(), prev_weights.end(), 1.0);
  }
  const WeightedSampler sampler(prev_weights);

  const FrameCorrelator correlator(frame.view());
  const EvaluationContext ctx{map, correlator, altitude, camera, conversion};
  BinGrid grid(cfg.kld.bin_size);

  StepResult result;
  ParticleSet& next = result.set;
  next.generation = prev.generation + 1;

  std::vector<Pose2D> batch;
  std::vector<double> likelihoods;
  std::size_t needed = required_particles(0, cfg.kld);
  while (next.particles.size() < needed && next.particles.size() < cfg.kld.n_max) {
    const std::size_t have = next.particles.size();
    const std::size_t count =
        std::min(std::max(needed - have, cfg.batch_size), cfg.kld.n_max - have);
    batch.resize(count);
    likelihoods.resize(count);
    // Draws stay on one sequential RNG stream so results do not depend on threads.
    for (auto& pose : batch) {
      pose = propagate(prev.particles[sampler.sample(rng)].pose, odo, cfg.noise, rng);
    }
    if (cfg.parallel) {
      evaluate_particles(ctx, batch, likelihoods);
    } else {
      evaluate_particles_serial(ctx, batch, likelihoods);
    }
    for (std::size_t j = 0; j < count; ++j) {
      next.particles.push_back({batch[j], likelihoods[j], 0.0});
      grid.mark(batch[j]);
    }
    needed = required_particles(grid.occupied(), cfg.kld);
  }

  likelihoods.resize(next.particles.size());
  std::transform(next.particles.begin(), next.particles.end(), likelihoods.begin(),
                 [](const Particle& p) { return p.likelihood; });
  const WeightVector weights = normalize(likelihoods);
  for (std::size_t i = 0; i < next.particles.size(); ++i) {
    next.particles[i].weight = weights.weights[i];
  }
  next.degenerate = weights.degenerate;

  result.estimate.pose = weighted_mean_pose(next, cfg.heading);
  result.estimate.n_evaluated = next.particles.size();
  result.estimate.k_bins = grid.occupied();
  result.estimate.degenerate = weights.degenerate;
  return result;
}

RunReport run_flight(const FlightLog& flight, const RasterMap& map,
                     const ConversionSpec& conversion, const FilterConfig& cfg,
                     std::uint64_t seed) {
  if (flight.frames.empty()) throw std::invalid_argument("run_flight: flight has no frames");
  cfg.validate();
  const Pose2D start = flight.frames.front().truth;
  if (!map.contains({start.x, start.y})) {
    throw ConfigError("flight start (" + std::to_string(start.x) + ", " +
                      std::to_string(start.y) + ") lies outside the map extent");
  }
  for (const auto& f : flight.frames) {
    if (f.image.width != flight.camera.patch_px || f.image.height != flight.camera.patch_px) {
      throw ConfigError("flight frame size does not match camera patch_px");
    }
  }

  Rng rng(seed);
  ParticleSet set =
      init_particles(start, cfg.init_radius, cfg.init_particles, cfg.eps_rot_init, rng);
  const std::vector<Pose2D> dr = dead_reckoning(flight);

  RunReport report;
  report.seed = seed;
  report.conversion = conversion.label();
  report.rows.reserve(flight.frames.size());
  for (std::size_t t = 0; t < flight.frames.size(); ++t) {
    const FlightFrame& f = flight.frames[t];
    StepResult res = step(set, f.image, f.odometry, f.altitude, map, flight.camera,
                          conversion, cfg, rng);
    set = std::move(res.set);
    ReportRow row;
    row.frame = t;
    row.truth = f.truth;
    row.estimate = res.estimate.pose;
    row.error_m = position_error(row.truth, row.estimate);
    row.n_evaluated = res.estimate.n_evaluated;
    row.k_bins = res.estimate.k_bins;
    row.degenerate = res.estimate.degenerate;
    row.dead_reckoning = dr[t];
    row.dr_error_m = position_error(row.truth, dr[t]);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace aerloc
