#ifndef AERLOC_TESTS_ORACLES_HPP_
#define AERLOC_TESTS_ORACLES_HPP_

// Independent reference computations used by the unit and acceptance tests.
// None of them call into the library.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracle {

/// Textbook Pearson correlation: centered sums in long double, two loops.
inline std::optional<double> naive_pearson(std::span<const std::uint8_t> a,
                                           std::span<const std::uint8_t> b) {
  const std::size_t n = a.size();
  long double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  long double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0 || sbb == 0) return std::nullopt;
  return static_cast<double>(sab / std::sqrt(saa * sbb));
}

/// Upper standard normal quantile by bisection on erfc.
inline double normal_upper_quantile(double tail) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double upper = 0.5 * std::erfc(mid / std::sqrt(2.0));
    (upper > tail ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Particle bound n = (k-1)/(2 eps) * (1 - a + sqrt(a) z)^3, a = 2/(9(k-1)),
/// rounded up.
inline double kld_bound(std::size_t k, double epsilon, double delta) {
  const double z = normal_upper_quantile(delta);
  const double km1 = static_cast<double>(k - 1);
  const double a = 2.0 / (9.0 * km1);
  const double t = 1.0 - a + std::sqrt(a) * z;
  return std::ceil(km1 / (2.0 * epsilon) * t * t * t);
}

/// Regularized upper incomplete gamma Q(s, x) (Numerical Recipes split).
inline double gamma_q(double s, double x) {
  if (x <= 0.0) return 1.0;
  const double log_prefix = -x + s * std::log(x) - std::lgamma(s);
  if (x < s + 1.0) {
    double term = 1.0 / s, sum = term;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (s + n);
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(log_prefix);
  }
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(log_prefix) * h;
}

/// p-value of Pearson's chi-square goodness-of-fit test. Categories with
/// zero expected probability must have zero counts and are skipped.
inline double chi_square_p(std::span<const std::size_t> counts,
                           std::span<const double> probs) {
  std::size_t total = 0;
  for (const auto c : counts) total += c;
  double stat = 0.0;
  int df = -1;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (probs[i] == 0.0) {
      if (counts[i] != 0) return 0.0;
      continue;
    }
    const double e = probs[i] * static_cast<double>(total);
    const double d = static_cast<double>(counts[i]) - e;
    stat += d * d / e;
    ++df;
  }
  if (df < 1) throw std::invalid_argument("chi_square_p: need two categories");
  return gamma_q(0.5 * df, 0.5 * stat);
}

}  // namespace oracle

#endif  // AERLOC_TESTS_ORACLES_HPP_
