#ifndef AERLOC_SIMILARITY_HPP_
#define AERLOC_SIMILARITY_HPP_

#include <cstdint>
#include <optional>
#include <span>

#include "aerloc/raster_map.hpp"

namespace aerloc {

/// Pearson correlation coefficient of two equally sized rasters, clamped to
/// [-1, 1]. std::nullopt when either input has zero variance.
/// Throws std::invalid_argument on size mismatch or fewer than 2 samples.
std::optional<double> pearson(std::span<const std::uint8_t> a,
                              std::span<const std::uint8_t> b);
std::optional<double> pearson(std::span<const double> a,
                              std::span<const double> b);
/// Also checks that width and height agree.
std::optional<double> pearson(const Image8& a, const Image8& b);

/// Correlates many candidate patches against one fixed camera frame. The
/// frame's moments are computed once; all sums are exact 64-bit integers.
class FrameCorrelator {
 public:
  explicit FrameCorrelator(std::span<const std::uint8_t> frame);

  std::size_t size() const { return frame_.size(); }
  bool frame_is_flat() const { return centered_sq_ == 0; }
  std::optional<double> correlate(std::span<const std::uint8_t> patch) const;

 private:
  std::span<const std::uint8_t> frame_;
  std::int64_t sum_ = 0;
  __int128 centered_sq_ = 0;  // n * sum(T^2) - sum(T)^2
};

}  // namespace aerloc

#endif  // AERLOC_SIMILARITY_HPP_
