#include "homsync/correlation.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>

#include "homsync/scan.hpp"

namespace homsync {
namespace {

// Local preparation states indexed by pulse index, as observed in the frame.
struct LocalStates {
  std::int64_t first = 0;
  std::vector<std::int8_t> states;  // -1 where no record exists

  explicit LocalStates(const FrameRecord& frame) {
    if (frame.pairs.empty()) return;
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = std::numeric_limits<std::int64_t>::min();
    for (const auto& p : frame.pairs) {
      lo = std::min(lo, p.local_index);
      hi = std::max(hi, p.local_index);
    }
    first = lo;
    states.assign(static_cast<std::size_t>(hi - lo + 1), -1);
    for (const auto& p : frame.pairs) {
      states[static_cast<std::size_t>(p.local_index - lo)] = static_cast<std::int8_t>(p.local_state);
    }
  }

  int at(std::int64_t index) const {
    const auto off = index - first;
    if (off < 0 || off >= static_cast<std::int64_t>(states.size())) return -1;
    return states[static_cast<std::size_t>(off)];
  }
};

}  // namespace

std::vector<CorrelationPoint> correlation_scan(std::span<const FrameRecord> frames, KRange range) {
  std::vector<CorrelationPoint> out;
  if (range.hi < range.lo) return out;
  const auto width = static_cast<std::size_t>(range.hi - range.lo + 1);
  std::vector<std::int64_t> trials(width, 0);
  std::vector<std::int64_t> hits(width, 0);

  for (const auto& frame : frames) {
    const LocalStates local(frame);
    for (const auto& p : frame.pairs) {
      const int remote_state = static_cast<int>(p.remote_state);
      for (int k = range.lo; k <= range.hi; ++k) {
        if (local.at(p.remote_index + k) != remote_state) continue;
        const auto slot = static_cast<std::size_t>(k - range.lo);
        ++trials[slot];
        hits[slot] += p.coincided;
      }
    }
  }

  out.reserve(width);
  for (int k = range.lo; k <= range.hi; ++k) {
    const auto slot = static_cast<std::size_t>(k - range.lo);
    const auto pt = make_scan_point(static_cast<double>(k), hits[slot], trials[slot]);
    out.push_back({k, pt.rate, pt.std_error, trials[slot], hits[slot]});
  }
  return out;
}

std::vector<CorrelationPoint> correlation_scan(const FrameRecord& frame, KRange range) {
  return correlation_scan(std::span<const FrameRecord>(&frame, 1), range);
}

std::optional<int> correlation_argmin(std::span<const CorrelationPoint> scan) {
  const CorrelationPoint* best = nullptr;
  for (const auto& pt : scan) {
    if (pt.n_trials <= 0) continue;
    if (!best || pt.rate < best->rate ||
        (pt.rate == best->rate &&
         (std::abs(pt.k) < std::abs(best->k) || (std::abs(pt.k) == std::abs(best->k) && pt.k < best->k)))) {
      best = &pt;
    }
  }
  if (!best) return std::nullopt;
  return best->k;
}

std::optional<int> dominant_index_offset(const FrameRecord& frame) {
  std::map<std::int64_t, std::int64_t> histogram;
  for (const auto& p : frame.pairs) ++histogram[p.local_index - p.remote_index];
  if (histogram.empty()) return std::nullopt;
  const auto best = std::max_element(histogram.begin(), histogram.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
  return static_cast<int>(best->first);
}

}  // namespace homsync
