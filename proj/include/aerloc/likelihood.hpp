#ifndef AERLOC_LIKELIHOOD_HPP_
#define AERLOC_LIKELIHOOD_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aerloc {

/// Similarity-to-likelihood conversion functions.
///
///   linear           (r + 1) / 2
///   softmax          e^r
///   rectifying       d >= 0: d(1 + r) for r <= 0, r(1 - d) + d for r > 0
///                    d <  0: 0 for r <= |d|, (r - |d|) / (1 - |d|) above
///   rectifying_offset  as rectifying, but the d < 0 branch is
///                    (1 + |d|)(r - |d|) + d^2, which jumps by d^2 at r = |d|
///   logistic         L(r, v) / L(1, v), L(x, v) = (1 + e^{-5x})^{-1/v}
enum class ConversionKind { linear, softmax, rectifying, rectifying_offset, logistic };

struct ConversionSpec {
  ConversionKind kind = ConversionKind::logistic;
  /// d for the rectifying kinds, v for logistic; unused otherwise.
  double param = 0.2;

  /// Throws std::invalid_argument for logistic v <= 0 or rectifying |d| > 1.
  void validate() const;
  /// Stable text form, e.g. "logistic:0.2" or "linear".
  std::string label() const;

  static ConversionSpec parse(std::string_view kind, double param);
  static ConversionSpec parse_label(std::string_view label);

  friend bool operator==(const ConversionSpec&, const ConversionSpec&) = default;
};

std::string_view to_string(ConversionKind kind);
bool has_parameter(ConversionKind kind);

/// Likelihood for similarity r in [-1, 1]; throws outside that range.
double convert(const ConversionSpec& spec, double r);

struct WeightVector {
  std::vector<double> weights;
  /// Set when every likelihood was zero and uniform weights were substituted.
  bool degenerate = false;
};

WeightVector normalize(std::span<const double> likelihoods);

}  // namespace aerloc

#endif  // AERLOC_LIKELIHOOD_HPP_
