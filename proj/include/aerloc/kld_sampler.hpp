#ifndef AERLOC_KLD_SAMPLER_HPP_
#define AERLOC_KLD_SAMPLER_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "aerloc/motion.hpp"
#include "aerloc/raster_map.hpp"

namespace aerloc {

struct KldConfig {
  double epsilon = 0.05;   // bound on the K-L distance
  double delta = 0.01;     // 1 - delta confidence
  double bin_size = 5.0;   // meters
  std::size_t n_min = 100;
  std::size_t n_max = 20000;

  void validate() const;
};

/// Unclamped Wilson-Hilferty form of the KLD particle bound for k >= 2
/// occupied bins, with z the upper 1 - delta standard normal quantile.
double kld_bound_raw(std::size_t k, double epsilon, double z);

/// ceil(kld_bound_raw) clamped to [n_min, n_max]. Requires k >= 2.
std::size_t kld_bound(std::size_t k, const KldConfig& cfg);

/// Particle count required by the sampling loop given the running bin count;
/// k < 2 is evaluated at k = 2.
std::size_t required_particles(std::size_t k, const KldConfig& cfg);

/// Occupancy grid of world-meter bins.
class BinGrid {
 public:
  explicit BinGrid(double bin_size);

  /// Marks the bin containing the pose; true iff it was empty before.
  bool mark(const Pose2D& pose);
  std::size_t occupied() const { return occupied_.size(); }
  double bin_size() const { return bin_size_; }
  void clear() { occupied_.clear(); }

 private:
  double bin_size_;
  std::unordered_set<std::uint64_t> occupied_;
};

/// Draws indices with probability proportional to the given weights using
/// one uniform draw and a binary search over the cumulative sums.
class WeightedSampler {
 public:
  explicit WeightedSampler(std::span<const double> weights);

  std::size_t sample(Rng& rng) const;
  std::size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

}  // namespace aerloc

#endif  // AERLOC_KLD_SAMPLER_HPP_
