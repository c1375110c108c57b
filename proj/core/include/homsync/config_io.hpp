#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "homsync/config.hpp"

namespace homsync {

/// Parses a JSON configuration. Sections mirror ExperimentConfig; any
/// omitted field keeps its default. `source.mu_effective` may be given
/// instead of `source.mu_source`, in which case the source mean photon
/// number is back-computed from the channel loss and detector efficiency
/// and a note is written to `log` when provided.
///
/// Throws ConfigError for malformed JSON, unknown keys, wrong types, or
/// invariant violations.
ExperimentConfig parse_config(std::string_view json_text, std::ostream* log = nullptr);
ExperimentConfig load_config(const std::string& path, std::ostream* log = nullptr);

/// Canonical JSON rendering (sorted keys, every field explicit).
std::string to_json_text(const ExperimentConfig& cfg);

/// 64-bit FNV-1a of the canonical rendering, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace homsync
