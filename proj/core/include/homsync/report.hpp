#pragma once

// Result files. CSV tables start with one comment line
//   # homsync <schema>/<version> config_hash=<16 hex> seed=<n>
// followed by a header row; reals use 9 significant digits. JSON documents
// carry the same metadata under "meta".

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "homsync/config.hpp"
#include "homsync/pipeline.hpp"

namespace homsync {

struct OutputMeta {
  std::string config_hash;
  std::uint64_t seed = 0;

  static OutputMeta from(const ExperimentConfig& cfg);
};

/// %.9g rendering used for every real in CSV output.
std::string format_real(double value);

void write_scan_csv(std::ostream& out, const OutputMeta& meta, std::span<const DipScanResult> scans);
void write_fit_csv(std::ostream& out, const OutputMeta& meta, std::span<const DipScanResult> scans,
                   double mu_effective);
void write_sync_csv(std::ostream& out, const OutputMeta& meta, const SyncResult& sync);
void write_correlation_csv(std::ostream& out, const OutputMeta& meta, const SyncResult& sync);
void write_verdict_csv(std::ostream& out, const OutputMeta& meta, const SecurityResult& security);
/// Columns: mu, honest_analytic, honest_mc, honest_err, ir_analytic, ir_mc,
/// ir_err, floor_eq10 (the uncorrelated-polarization floor).
void write_sweep_csv(std::ostream& out, const OutputMeta& meta, std::span<const SweepRow> rows);
void write_attack_dip_csv(std::ostream& out, const OutputMeta& meta,
                          std::span<const AttackDipRow> rows);
void write_curves_csv(std::ostream& out, const OutputMeta& meta, std::span<const CurveRow> rows);

// Each writer below creates `dir` if needed and returns the files written.

std::vector<std::filesystem::path> write_dip_scan_outputs(const std::filesystem::path& dir,
                                                          OutputFormat format,
                                                          const ExperimentConfig& cfg,
                                                          std::span<const DipScanResult> scans);
std::vector<std::filesystem::path> write_sync_outputs(const std::filesystem::path& dir,
                                                      OutputFormat format,
                                                      const ExperimentConfig& cfg,
                                                      const SyncResult& sync);
std::vector<std::filesystem::path> write_security_outputs(const std::filesystem::path& dir,
                                                          OutputFormat format,
                                                          const ExperimentConfig& cfg,
                                                          const SecurityResult& security);
std::vector<std::filesystem::path> write_curves_outputs(const std::filesystem::path& dir,
                                                        OutputFormat format,
                                                        const ExperimentConfig& cfg,
                                                        std::span<const CurveRow> rows);

/// Single-record failure report (stage message and exit code).
std::filesystem::path write_error_record(const std::filesystem::path& dir, OutputFormat format,
                                         const ExperimentConfig& cfg, const std::string& command,
                                         const std::string& message, int exit_code);

}  // namespace homsync
