#include "homsync/offset.hpp"

#include <cmath>

namespace homsync {

OffsetEstimate estimate_offset(MeasuredDelay dt_aa, MeasuredDelay dt_bb, int k, int k_prime,
                               double rep_period) {
  OffsetEstimate est;
  est.k = k;
  est.k_prime = k_prime;
  est.dt_aa = dt_aa;
  est.dt_bb = dt_bb;
  est.rep_period = rep_period;
  est.delta_hat = 0.5 * (static_cast<double>(k - k_prime) * rep_period + dt_bb.value - dt_aa.value);
  est.delta_stderr = 0.5 * std::hypot(dt_bb.std_error, dt_aa.std_error);
  return est;
}

OffsetEstimate estimate_offset(const DipFit& dt_aa, const DipFit& dt_bb, int k, int k_prime,
                               double rep_period) {
  return estimate_offset(MeasuredDelay{dt_aa.center, dt_aa.center_stderr},
                         MeasuredDelay{dt_bb.center, dt_bb.center_stderr}, k, k_prime, rep_period);
}

double asymmetry_bias(double prop_delay_ab, double prop_delay_ba) {
  return 0.5 * (prop_delay_ab - prop_delay_ba);
}

}  // namespace homsync
