#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "homsync/config.hpp"

namespace homsync {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfigError = 2,
  kExitFitFailure = 3,
  kExitInsufficientData = 4,
};

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  // When set, dip-scan also writes the event log of the frame nearest each
  // fitted optimum.
  bool event_log = false;
};

// Each command runs one experiment, writes its artifacts under
// options.out_dir in cfg.output.format, reports progress to `log`, and maps
// failures to an exit code (writing an error record for stage failures).

int cmd_dip_scan(const ExperimentConfig& cfg, const CommandOptions& options, std::ostream& log);
int cmd_sync(const ExperimentConfig& cfg, const CommandOptions& options, std::ostream& log);
int cmd_security(const ExperimentConfig& cfg, const CommandOptions& options, std::ostream& log);
int cmd_curves(const ExperimentConfig& cfg, const CommandOptions& options, std::ostream& log);

}  // namespace homsync
