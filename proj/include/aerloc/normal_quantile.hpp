#ifndef AERLOC_NORMAL_QUANTILE_HPP_
#define AERLOC_NORMAL_QUANTILE_HPP_

namespace aerloc {

/// Inverse CDF of N(0, 1) for p in (0, 1): Acklam's rational approximation
/// (relative error below 1.2e-9) polished by one Halley step on erfc.
/// Throws outside (0, 1).
double normal_quantile(double p);

}  // namespace aerloc

#endif  // AERLOC_NORMAL_QUANTILE_HPP_
