#pragma once

// Closed-form two-pulse interference for phase-randomized weak coherent
// pulses meeting at a beamsplitter. All functions are pure.
//
// Units: tau in the reciprocal of sigma_spec (the library uses ns and rad/ns).

namespace homsync {

/// Polarization and spectro-temporal overlap of two Gaussian wave packets
/// with matched center frequency and bandwidth.
struct OverlapParams {
  double cos_phi = 1.0;     // |e_a* . e_b|, in [0, 1]
  double tau = 0.0;         // relative arrival delay
  double sigma_spec = 1.0;  // spectral envelope standard deviation, > 0
};

/// Mean photon numbers on the two input ports and the beamsplitter split.
struct SourcePair {
  double mu_a = 1.0;
  double mu_b = 1.0;
  double transmittance = 0.5;
  double reflectance = 0.5;

  static SourcePair balanced(double mu) { return {mu, mu, 0.5, 0.5}; }
};

enum class WidthConvention { StdDev, Fwhm };

inline constexpr double kFwhmPerSigma = 2.35482004503094938;  // 2 sqrt(2 ln 2)

/// Standard deviation of the temporal field envelope for a width given in
/// either convention.
double temporal_stddev(double temporal_width, WidthConvention convention);

/// Spectral sigma of a transform-limited Gaussian whose field amplitude has
/// temporal standard deviation sigma_t: sigma_spec = 1 / (2 sigma_t).
double spectral_sigma(double temporal_width, WidthConvention convention);

/// Temporal factor exp(-sigma^2 tau^2 / 2) of the mode overlap.
double temporal_overlap(double tau, double sigma_spec);

/// S = cos_phi * exp(-sigma^2 tau^2 / 2).
double mode_overlap(const OverlapParams& params);

/// Coincidence probability for two phase-randomized coherent pulses with
/// overlap s in [0, 1]:
///   1 + e^{-mu_a-mu_b} - [e^{-(T mu_a + R mu_b)} + e^{-(R mu_a + T mu_b)}]
///                        * I0(2 sqrt(mu_a mu_b R T) s)
/// Throws std::domain_error for s outside [0, 1] or an invalid SourcePair.
double coincidence_probability(const SourcePair& pair, double s);

/// Balanced case 1 + e^{-2 mu} - 2 e^{-mu} I0(mu s).
double coincidence_probability(double mu, double s);

/// coincidence_probability(pair, s) with the s-independent factors computed
/// once; for evaluating many overlaps at a fixed source pair.
class CoincidenceModel {
 public:
  explicit CoincidenceModel(const SourcePair& pair);
  explicit CoincidenceModel(double mu) : CoincidenceModel(SourcePair::balanced(mu)) {}

  /// Same contract as coincidence_probability(pair, s).
  double operator()(double s) const;

 private:
  double distinguishable_;  // expm1(-u) * expm1(-v)
  double bessel_weight_;    // e^{-u} + e^{-v}
  double bessel_scale_;     // 2 sqrt(mu_a mu_b R T)
};

/// Fully distinguishable pulses (s = 0): (1 - e^{-mu})^2.
double distinguishable_probability(double mu);

/// Coincidence floor at zero delay averaged over independent uniform BB84
/// preparations on both sides.
double expected_floor(double mu);

/// Coincidence probability at zero delay for identical polarizations, the
/// lowest value reachable with weak coherent pulses.
double postselected_min(double mu);

/// Normalized dip depth (P_max - P_min) / P_max for matched polarizations,
/// (I0(mu) - 1) / (2 sinh^2(mu / 2)). Returns the limit 1/2 at mu = 0.
double visibility(double mu);

}  // namespace homsync
