#include "homsync/scan.hpp"

#include <cmath>

namespace homsync {

double binomial_stderr(std::int64_t successes, std::int64_t trials) {
  if (trials <= 0) return 0.0;
  const double n = static_cast<double>(trials);
  if (successes <= 0 || successes >= trials) return 3.0 / n;
  const double p = static_cast<double>(successes) / n;
  return std::sqrt(p * (1.0 - p) / n);
}

ScanPoint make_scan_point(double delay, std::int64_t coincidences, std::int64_t trials) {
  ScanPoint pt;
  pt.delay = delay;
  pt.n_trials = trials;
  pt.n_coincidences = coincidences;
  pt.rate = trials > 0 ? static_cast<double>(coincidences) / static_cast<double>(trials) : 0.0;
  pt.std_error = binomial_stderr(coincidences, trials);
  return pt;
}

}  // namespace homsync
