#pragma once

// Reference implementations used only by the tests. None of them call the
// library's Bessel function or closed forms.

#include <array>
#include <cmath>
#include <numbers>

namespace homsync::oracle {

/// Power series sum_k (x/2)^{2k} / (k!)^2, summed until terms vanish.
inline double bessel_i0_series(double x) {
  long double term = 1.0L, sum = 1.0L;
  const long double q = static_cast<long double>(x) * x / 4.0L;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
    if (term < sum * 1e-21L) break;
  }
  return static_cast<double>(sum);
}

/// Coincidence probability of two phase-randomized coherent pulses, averaged
/// numerically over the relative phase. For a fixed phase the outputs are
/// coherent with means n1, n2 and the threshold detectors click
/// independently. The integrand is smooth and periodic, so the trapezoid
/// rule converges exponentially.
inline double phase_average(double mu_a, double mu_b, double transmittance, double s,
                            int nodes = 4096) {
  const double reflectance = 1.0 - transmittance;
  const double cross = 2.0 * std::sqrt(transmittance * reflectance * mu_a * mu_b) * s;
  const double base1 = transmittance * mu_a + reflectance * mu_b;
  const double base2 = reflectance * mu_a + transmittance * mu_b;
  long double acc = 0.0L;
  for (int i = 0; i < nodes; ++i) {
    const double phase = 2.0 * std::numbers::pi * i / nodes;
    const double n1 = base1 + cross * std::cos(phase);
    const double n2 = base2 - cross * std::cos(phase);
    acc += (1.0L - std::exp(-static_cast<long double>(n1))) *
           (1.0L - std::exp(-static_cast<long double>(n2)));
  }
  return static_cast<double>(acc / nodes);
}

inline double balanced(double mu, double s) { return phase_average(mu, mu, 0.5, s); }

// BB84 states as polarization angles: H=0, V=90, D=45, A=135 degrees.
inline constexpr std::array<double, 4> kStateAngles{0.0, std::numbers::pi / 2, std::numbers::pi / 4,
                                                    3 * std::numbers::pi / 4};

inline double overlap(int a, int b) { return std::abs(std::cos(kStateAngles[a] - kStateAngles[b])); }

/// Zero-delay coincidence probability averaged over all 16 equiprobable
/// preparation pairs.
inline double expected_floor(double mu) {
  double sum = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) sum += balanced(mu, overlap(a, b));
  return sum / 16.0;
}

inline double postselected_min(double mu) { return balanced(mu, 1.0); }

inline double visibility(double mu) {
  const double pmax = balanced(mu, 0.0);
  return (pmax - balanced(mu, 1.0)) / pmax;
}

/// Both sides prepare the same state; Eve measures the remote pulse in a
/// uniformly chosen basis and resends her outcome. Enumerates every state,
/// basis and outcome with its probability.
inline double ir_postselected_floor(double mu, double temporal = 1.0) {
  double sum = 0.0;
  for (int prepared = 0; prepared < 4; ++prepared) {
    for (int basis = 0; basis < 2; ++basis) {
      for (int outcome = 2 * basis; outcome < 2 * basis + 2; ++outcome) {
        const double c = overlap(prepared, outcome);
        const double p_outcome = c * c;  // Malus
        if (p_outcome < 1e-15) continue;
        sum += 0.25 * 0.5 * p_outcome * balanced(mu, overlap(outcome, prepared) * temporal);
      }
    }
  }
  return sum;
}

}  // namespace homsync::oracle
