#include "homsync/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace homsync {

double emission_time(Party party, std::int64_t index, double rep_period, const ClockPair& clocks) {
  const double t = static_cast<double>(index) * rep_period;
  return party == Party::Alice ? t : t - clocks.delta_true;
}

std::vector<PulseRecord> emission_schedule(Party party, const SourceConfig& src,
                                           const ClockPair& clocks, Engine& rng) {
  std::vector<PulseRecord> pulses;
  if (src.n_pulses <= 0) return pulses;
  pulses.reserve(static_cast<std::size_t>(src.n_pulses));
  std::uniform_int_distribution<int> pick(0, 3);
  for (std::int64_t i = 0; i < src.n_pulses; ++i) {
    pulses.push_back({party, i, emission_time(party, i, src.rep_period, clocks),
                      static_cast<Bb84State>(pick(rng))});
  }
  return pulses;
}

std::vector<IndexPair> pair_pulses(std::span<const PulseRecord> remote,
                                   std::span<const PulseRecord> local, ArrivalOffsets offsets,
                                   double max_separation) {
  std::vector<IndexPair> pairs;
  if (remote.empty() || local.empty()) return pairs;
  pairs.reserve(remote.size());

  // Search on emission times, shifted into the local stream's frame. Sorted
  // remotes advance the cursor linearly; anything else falls back to a
  // binary search.
  const auto by_time = [](const PulseRecord& p, double t) { return p.emit_time < t; };
  auto it = local.begin();
  double last_target = -std::numeric_limits<double>::infinity();
  for (const auto& r : remote) {
    const double arrival = r.emit_time + offsets.remote;
    const double target = arrival - offsets.local;
    if (target < last_target) {
      it = std::lower_bound(local.begin(), local.end(), target, by_time);
    } else {
      while (it != local.end() && it->emit_time < target) ++it;
    }
    last_target = target;

    const PulseRecord* best = nullptr;
    double best_gap = 0.0;
    // Earlier candidate first so that ties keep it.
    if (it != local.begin()) {
      const auto& prev = *std::prev(it);
      best = &prev;
      best_gap = std::fabs(arrival - (prev.emit_time + offsets.local));
    }
    if (it != local.end()) {
      const double gap = std::fabs(arrival - (it->emit_time + offsets.local));
      if (!best || gap < best_gap) {
        best = &*it;
        best_gap = gap;
      }
    }
    if (best && best_gap <= max_separation) {
      pairs.push_back({r.index, best->index, arrival - (best->emit_time + offsets.local)});
    }
  }
  return pairs;
}

}  // namespace homsync
