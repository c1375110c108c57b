#pragma once

// Intercept-resend adversary and the post-selected coincidence test that
// exposes it.

#include <cstdint>
#include <span>
#include <vector>

#include "homsync/bb84.hpp"
#include "homsync/config.hpp"
#include "homsync/rng.hpp"

namespace homsync {

/// Eve measures `state` in `eve_basis` and resends her outcome: the same
/// state when the bases agree, otherwise either state of her basis with
/// probability 1/2.
Bb84State resend_after_measurement(Bb84State state, Basis eve_basis, Engine& rng);

/// Intercept-resend with a uniformly random measurement basis.
Bb84State ir_transform(Bb84State state, Engine& rng);

/// Post-selected (identical preparation) coincidence probability under
/// intercept-resend, as a function of the temporal overlap factor
/// exp(-sigma^2 tau^2 / 2): half the pairs keep perfect polarization
/// overlap, half arrive with overlap 1/sqrt(2).
double ir_postselected_probability(double mu, double temporal_factor);

/// ir_postselected_probability at zero delay:
/// 1 + e^{-2 mu} - e^{-mu} [I0(mu) + I0(mu / sqrt 2)].
double ir_postselected_floor(double mu);

struct DetectionVerdict {
  double observed_rate = 0.0;
  std::int64_t n_trials = 0;
  double honest_floor = 0.0;
  double attacked_floor = 0.0;
  double threshold = 0.0;
  double z_score = 0.0;
  bool flagged = false;
};

/// One-sided binomial test of an observed post-selected coincidence rate
/// against the honest floor. The threshold is the honest floor plus
/// z(significance) binomial standard errors, capped at the midpoint between
/// the honest and intercept-resend floors. Throws InsufficientDataError for
/// zero trials and std::domain_error for significance outside (0, 0.5).
DetectionVerdict detect_eavesdropper(double observed_rate, std::int64_t n_trials, double mu,
                                     double significance);

/// Counts from Monte Carlo post-selected trials, split by preparation basis.
struct PostselectedCounts {
  std::int64_t trials = 0;
  std::int64_t coincidences = 0;
  std::int64_t rect_trials = 0;
  std::int64_t rect_coincidences = 0;
  std::int64_t diag_trials = 0;
  std::int64_t diag_coincidences = 0;

  double rate() const;
  double rect_rate() const;
  double diag_rate() const;
};

/// Draws `trials` post-selected pulse pairs (both sides prepared the same
/// uniform BB84 state) at the given temporal overlap factor, passing the
/// remote pulse through the attack when one is configured.
PostselectedCounts sample_postselected(double mu, double temporal_factor, AttackKind attack,
                                       std::int64_t trials, Engine& rng);

struct SweepRow {
  double mu = 0.0;
  double honest_analytic = 0.0;
  double honest_mc = 0.0;
  double honest_err = 0.0;
  double ir_analytic = 0.0;
  double ir_mc = 0.0;
  double ir_err = 0.0;
  double floor_uncorrelated = 0.0;  // expected_floor(mu)
};

/// Zero-delay post-selected coincidence probability versus mu for the
/// honest and intercept-resend channels, analytic and Monte Carlo.
std::vector<SweepRow> attack_sweep(std::span<const double> mu_values, std::int64_t trials_per_point,
                                   std::uint64_t seed);

struct AttackDipRow {
  double tau = 0.0;
  double honest_analytic = 0.0;
  double honest_mc = 0.0;
  double honest_err = 0.0;
  double ir_analytic = 0.0;
  double ir_mc = 0.0;
  double ir_err = 0.0;
};

/// Post-selected dip versus relative delay for honest and attacked channels.
std::vector<AttackDipRow> attack_dip(double mu, double sigma_spec, std::span<const double> taus,
                                     std::int64_t trials_per_point, std::uint64_t seed);

}  // namespace homsync
