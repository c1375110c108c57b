#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "homsync/simulator.hpp"

namespace homsync {

struct KRange {
  int lo = -10;
  int hi = 10;
};

struct CorrelationPoint {
  int k = 0;
  double rate = 0.0;
  double std_error = 0.0;
  std::int64_t n_trials = 0;
  std::int64_t n_coincidences = 0;
};

/// Post-selected coincidence rate versus a hypothesized index difference
/// k = local - remote. Each recorded coincidence outcome belongs to the pulse
/// pair that physically met; for a candidate k the outcome is kept only when
/// the remote pulse and the local pulse k slots later were prepared in the
/// same state. At the true k this selects matched pairs and the rate dips;
/// elsewhere the selection is blind to the interfering pair's polarizations.
///
/// Frames are pooled. A k with no post-selected trials is reported with
/// zero trials.
std::vector<CorrelationPoint> correlation_scan(std::span<const FrameRecord> frames, KRange range);
std::vector<CorrelationPoint> correlation_scan(const FrameRecord& frame, KRange range);

/// The k with the lowest rate among entries that have trials; ties go to
/// the smaller |k|, then the smaller k.
std::optional<int> correlation_argmin(std::span<const CorrelationPoint> scan);

/// Index difference of the physical pairs recorded in a frame (the most
/// common local - remote). Empty frames yield nullopt.
std::optional<int> dominant_index_offset(const FrameRecord& frame);

}  // namespace homsync
