#pragma once

#include <cstdint>

namespace homsync {

/// Binomial standard error sqrt(p (1 - p) / n) of a rate estimated from
/// `trials` Bernoulli draws. Rates of exactly 0 or 1 fall back to the
/// rule-of-three bound 3 / n so that weights stay finite. Returns 0 for zero
/// trials.
double binomial_stderr(std::int64_t successes, std::int64_t trials);

/// One delay-line setting of a path-balancing scan.
struct ScanPoint {
  double delay = 0.0;  // ns
  double rate = 0.0;
  double std_error = 0.0;
  std::int64_t n_trials = 0;
  std::int64_t n_coincidences = 0;
};

ScanPoint make_scan_point(double delay, std::int64_t coincidences, std::int64_t trials);

}  // namespace homsync
