#include "aerloc/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aerloc {
namespace {

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("pearson: size mismatch");
  if (a < 2) throw std::invalid_argument("pearson: need at least 2 samples");
}

using Wide = __int128;

Wide centered(std::int64_t n, std::int64_t s, std::int64_t sq) {
  return static_cast<Wide>(n) * sq - static_cast<Wide>(s) * s;
}

// n*Sxy - Sx*Sy over sqrt((n*Sxx - Sx^2)(n*Syy - Sy^2)), exact integer moments.
std::optional<double> finish(std::int64_t n, std::int64_t sx, std::int64_t sy,
                             std::int64_t sxy, Wide var_x, Wide var_y) {
  if (var_x == 0 || var_y == 0) return std::nullopt;
  const double cov = static_cast<double>(static_cast<Wide>(n) * sxy -
                                         static_cast<Wide>(sx) * sy);
  const double r = cov / (std::sqrt(static_cast<double>(var_x)) *
                          std::sqrt(static_cast<double>(var_y)));
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace

std::optional<double> pearson(std::span<const std::uint8_t> a,
                              std::span<const std::uint8_t> b) {
  check_sizes(a.size(), b.size());
  std::int64_t sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::int64_t x = a[i];
    const std::int64_t y = b[i];
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
    sab += x * y;
  }
  const auto n = static_cast<std::int64_t>(a.size());
  return finish(n, sa, sb, sab, centered(n, sa, saa), centered(n, sb, sbb));
}

std::optional<double> pearson(std::span<const double> a,
                              std::span<const double> b) {
  check_sizes(a.size(), b.size());
  const double n = static_cast<double>(a.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return std::clamp(sab / (std::sqrt(saa) * std::sqrt(sbb)), -1.0, 1.0);
}

std::optional<double> pearson(const Image8& a, const Image8& b) {
  if (a.width != b.width || a.height != b.height || a.channels != b.channels) {
    throw std::invalid_argument("pearson: dimension mismatch");
  }
  return pearson(a.view(), b.view());
}

FrameCorrelator::FrameCorrelator(std::span<const std::uint8_t> frame)
    : frame_(frame) {
  if (frame.size() < 2) throw std::invalid_argument("FrameCorrelator: frame too small");
  std::int64_t sq = 0;
  for (const std::uint8_t v : frame) {
    sum_ += v;
    sq += static_cast<std::int64_t>(v) * v;
  }
  centered_sq_ = centered(static_cast<std::int64_t>(frame.size()), sum_, sq);
}

std::optional<double> FrameCorrelator::correlate(
    std::span<const std::uint8_t> patch) const {
  if (patch.size() != frame_.size()) {
    throw std::invalid_argument("FrameCorrelator: size mismatch");
  }
  // 32-bit partial sums are exact for patches up to 2^15 pixels per block.
  std::int64_t s = 0, ss = 0, st = 0;
  constexpr std::size_t kBlock = 1u << 15;
  const std::uint8_t* p = patch.data();
  const std::uint8_t* t = frame_.data();
  for (std::size_t base = 0; base < patch.size(); base += kBlock) {
    const std::size_t end = std::min(patch.size(), base + kBlock);
    std::uint32_t bs = 0, bss = 0, bst = 0;
#pragma omp simd reduction(+ : bs, bss, bst)
    for (std::size_t i = base; i < end; ++i) {
      const std::uint32_t x = p[i];
      bs += x;
      bss += x * x;
      bst += x * t[i];
    }
    s += bs;
    ss += bss;
    st += bst;
  }
  const auto n = static_cast<std::int64_t>(patch.size());
  return finish(n, s, sum_, st, centered(n, s, ss), centered_sq_);
}

}  // namespace aerloc
