#pragma once

#include <cstdint>
#include <vector>

#include "homsync/bb84.hpp"
#include "homsync/config.hpp"
#include "homsync/rng.hpp"
#include "homsync/security.hpp"

namespace homsync {

/// One remote/local pulse pair that met at the receiving beamsplitter.
struct PairEvent {
  std::int64_t remote_index = 0;
  std::int64_t local_index = 0;
  double tau_effective = 0.0;  // ns, arrival difference plus detector jitter
  Bb84State remote_state = Bb84State::H;   // as prepared by the sender
  Bb84State local_state = Bb84State::H;
  Bb84State channel_state = Bb84State::H;  // as it reached the beamsplitter
  bool coincided = false;
};

/// Event log of one frame at one delay-line setting.
struct FrameRecord {
  Direction direction = Direction::AtoB;
  double vdl_setting = 0.0;  // ns
  std::vector<PairEvent> pairs;
  std::int64_t n_trials = 0;  // == pairs.size()

  std::int64_t coincidences() const;
};

/// Identical-preparation subset of a frame, split by basis.
PostselectedCounts postselected_counts(const FrameRecord& frame);

/// Zero-mean Gaussian timing error in ps with standard deviation
/// fwhm / 2.35482. Returns exactly 0 for zero FWHM without drawing.
double sample_jitter(double fwhm_ps, Engine& rng);

/// Delay-line setting at which the receiver expects the dip, from the
/// nominal channel delay and the offset known to `scan.coarse_resolution`.
double expected_local_delay(const ExperimentConfig& cfg, Direction direction);

/// Monte Carlo frame: both parties emit N pulses with random BB84 states,
/// remote pulses travel the channel (through the attacker, if any), local
/// pulses through the delay line set to `vdl_setting`, and every paired
/// arrival produces a coincidence with the two-pulse interference
/// probability at the effective mean photon number.
///
/// Deterministic for fixed (cfg, direction, vdl_setting, seed). Throws
/// ConfigError when the effective mean photon number is not positive.
FrameRecord simulate_frame(const ExperimentConfig& cfg, Direction direction, double vdl_setting,
                           std::uint64_t seed);

/// postselected_counts(simulate_frame(...)) without storing the frame.
PostselectedCounts simulate_postselected_counts(const ExperimentConfig& cfg, Direction direction,
                                                double vdl_setting, std::uint64_t seed);

}  // namespace homsync
