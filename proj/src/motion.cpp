#include "aerloc/motion.hpp"

#include <cmath>
#include <stdexcept>

namespace aerloc {

void NoiseConfig::validate() const {
  for (const double v : {alpha1, alpha2, alpha3, eps_tran_scale, eps_tran_min, eps_rot}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("NoiseConfig: all coefficients must be >= 0");
    }
  }
}

double sample_normal(double eps, Rng& rng) {
  if (eps == 0.0) return 0.0;
  std::normal_distribution<double> gaussian(0.0, 1.0 / 3.0);
  return eps * gaussian(rng);
}

Pose2D propagate(const Pose2D& pose, const OdometryDelta& odo,
                 const NoiseConfig& noise, Rng& rng) {
  const double tran = odo.d_tran + sample_normal(noise.eps_tran(odo.d_tran), rng);
  const double rot = odo.d_rot + sample_normal(noise.eps_rot, rng);
  const double heading = pose.yaw + noise.alpha3 * rot;
  return {pose.x + noise.alpha1 * tran * std::cos(heading),
          pose.y + noise.alpha2 * tran * std::sin(heading),
          normalize_angle(heading)};
}

}  // namespace aerloc
