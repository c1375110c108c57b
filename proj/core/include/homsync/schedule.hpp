#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "homsync/bb84.hpp"
#include "homsync/config.hpp"
#include "homsync/rng.hpp"

namespace homsync {

struct PulseRecord {
  Party party = Party::Alice;
  std::int64_t index = 0;
  double emit_time = 0.0;  // ns, in Alice's frame
  Bb84State state = Bb84State::H;
};

/// Emission time in Alice's frame of `party`'s pulse `index`:
/// Alice emits at index * T_rep, Bob at index * T_rep - delta.
double emission_time(Party party, std::int64_t index, double rep_period, const ClockPair& clocks);

/// The party's N pulses with independent uniform BB84 states drawn from `rng`.
std::vector<PulseRecord> emission_schedule(Party party, const SourceConfig& src,
                                           const ClockPair& clocks, Engine& rng);

/// Fixed delays added to the emission times of each stream to obtain the
/// arrival times at the receiving beamsplitter.
struct ArrivalOffsets {
  double remote = 0.0;
  double local = 0.0;
};

struct IndexPair {
  std::int64_t remote_index;
  std::int64_t local_index;
  double separation;  // remote arrival - local arrival, ns
};

/// Pairs each remote arrival with the nearest local arrival no further than
/// `max_separation` away (inclusive). Equidistant candidates resolve to the
/// earlier local pulse. `local` must be sorted by emit_time; remotes sorted
/// the same way are paired in linear time. Remotes without a partner are
/// dropped.
std::vector<IndexPair> pair_pulses(std::span<const PulseRecord> remote,
                                   std::span<const PulseRecord> local, ArrivalOffsets offsets,
                                   double max_separation);

}  // namespace homsync
