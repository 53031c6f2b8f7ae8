#include "aerloc/kld_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aerloc/normal_quantile.hpp"

namespace aerloc {

void KldConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("KldConfig: epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("KldConfig: delta must be in (0, 1)");
  }
  if (!(bin_size > 0.0)) throw std::invalid_argument("KldConfig: bin_size must be > 0");
  if (n_min < 1 || n_min > n_max) {
    throw std::invalid_argument("KldConfig: need 1 <= n_min <= n_max");
  }
}

double kld_bound_raw(std::size_t k, double epsilon, double z) {
  if (k < 2) throw std::invalid_argument("kld_bound: needs k >= 2");
  const double km1 = static_cast<double>(k - 1);
  const double a = 2.0 / (9.0 * km1);
  const double cube = 1.0 - a + std::sqrt(a) * z;
  return km1 / (2.0 * epsilon) * cube * cube * cube;
}

std::size_t kld_bound(std::size_t k, const KldConfig& cfg) {
  const double z = normal_quantile(1.0 - cfg.delta);
  const double n = std::ceil(kld_bound_raw(k, cfg.epsilon, z));
  if (n >= static_cast<double>(cfg.n_max)) return cfg.n_max;
  return std::max(cfg.n_min, static_cast<std::size_t>(std::max(n, 0.0)));
}

std::size_t required_particles(std::size_t k, const KldConfig& cfg) {
  return kld_bound(std::max<std::size_t>(k, 2), cfg);
}

BinGrid::BinGrid(double bin_size) : bin_size_(bin_size) {
  if (!(bin_size > 0.0)) throw std::invalid_argument("BinGrid: bin_size must be > 0");
}

bool BinGrid::mark(const Pose2D& pose) {
  const auto i = static_cast<std::int32_t>(std::floor(pose.x / bin_size_));
  const auto j = static_cast<std::int32_t>(std::floor(pose.y / bin_size_));
  const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
                            static_cast<std::uint32_t>(j);
  return occupied_.insert(key).second;
}

WeightedSampler::WeightedSampler(std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("WeightedSampler: empty set");
  cumulative_.reserve(weights.size());
  double running = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("WeightedSampler: negative weight");
    running += w;
    cumulative_.push_back(running);
  }
  if (!(running > 0.0)) throw std::invalid_argument("WeightedSampler: zero total weight");
}

std::size_t WeightedSampler::sample(Rng& rng) const {
  const double total = cumulative_.back();
  const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) {
    // u rounded up to total; take the last index carrying mass.
    it = std::lower_bound(cumulative_.begin(), cumulative_.end(), total);
  }
  return static_cast<std::size_t>(it - cumulative_.begin());
}

}  // namespace aerloc
