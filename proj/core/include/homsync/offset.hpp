#pragma once

#include "homsync/fit.hpp"

namespace homsync {

/// A locally measured delay-line setting with its 1-sigma error, ns.
struct MeasuredDelay {
  double value = 0.0;
  double std_error = 0.0;
};

struct OffsetEstimate {
  int k = 0;        // local - remote index difference, A->B
  int k_prime = 0;  // local - remote index difference, B->A
  MeasuredDelay dt_bb;  // Bob's optimal delay (A->B scan)
  MeasuredDelay dt_aa;  // Alice's optimal delay (B->A scan)
  double rep_period = 0.0;
  double delta_hat = 0.0;
  double delta_stderr = 0.0;
};

/// delta = [(k - k') T_rep + dt_bb - dt_aa] / 2, assuming equal propagation
/// delay both ways; sigma = sqrt(sigma_bb^2 + sigma_aa^2) / 2.
OffsetEstimate estimate_offset(MeasuredDelay dt_aa, MeasuredDelay dt_bb, int k, int k_prime,
                               double rep_period);
OffsetEstimate estimate_offset(const DipFit& dt_aa, const DipFit& dt_bb, int k, int k_prime,
                               double rep_period);

/// Bias of estimate_offset when the channel is not reciprocal:
/// (dt_ab - dt_ba) / 2.
double asymmetry_bias(double prop_delay_ab, double prop_delay_ba);

}  // namespace homsync
