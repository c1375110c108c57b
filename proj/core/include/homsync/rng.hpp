#pragma once

#include <cstdint>
#include <random>

#include "homsync/config.hpp"

namespace homsync {

using Engine = std::mt19937_64;

/// What a derived stream is used for. Distinct purposes never share a stream.
enum class StreamPurpose : std::uint64_t {
  Frame = 1,
  SecurityFrame = 2,
  SweepPoint = 3,
  AttackDip = 4,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for the stream keyed on (master seed, purpose, direction, point
/// index, frame index). Streams for different keys are statistically
/// independent and can be produced in any order, which keeps parallel
/// execution reproducible.
std::uint64_t derive_seed(std::uint64_t master, StreamPurpose purpose, Direction direction,
                          std::uint64_t point_index, std::uint64_t frame_index) noexcept;

inline Engine make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Engine(seq);
}

}  // namespace homsync
