#include "homsync/rng.hpp"

namespace homsync {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, StreamPurpose purpose, Direction direction,
                          std::uint64_t point_index, std::uint64_t frame_index) noexcept {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ static_cast<std::uint64_t>(purpose));
  h = mix64(h ^ (direction == Direction::AtoB ? 0x41ULL : 0x42ULL));
  h = mix64(h ^ point_index);
  h = mix64(h ^ frame_index);
  return h;
}

}  // namespace homsync
