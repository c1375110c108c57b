#pragma once

// End-to-end orchestration: path-balancing scans, correlation analysis,
// offset estimation and the security checks, each driven by one
// ExperimentConfig. Every random draw comes from a stream derived from
// cfg.seed, so results do not depend on thread count or scheduling.

#include <cstddef>
#include <string>
#include <vector>

#include "homsync/config.hpp"
#include "homsync/correlation.hpp"
#include "homsync/fit.hpp"
#include "homsync/offset.hpp"
#include "homsync/scan.hpp"
#include "homsync/security.hpp"

namespace homsync {

/// Delay-line settings of a path-balancing scan: expected center plus
/// integer multiples of scan.vdl_step out to the half-span.
std::vector<double> vdl_grid(const ExperimentConfig& cfg, Direction direction);

/// Delay setting that aligns the two streams exactly (uses the true offset
/// and channel delay; the protocol itself never calls this).
double balanced_local_delay(const ExperimentConfig& cfg, Direction direction);

/// Post-selected coincidence rate at every grid point, pooling scan.frames
/// frames per point.
std::vector<ScanPoint> run_vdl_scan(const ExperimentConfig& cfg, Direction direction);

/// Frames recorded at grid point `point_index` (re-simulated from their
/// seeds, identical to the ones pooled by run_vdl_scan).
std::vector<FrameRecord> frames_at(const ExperimentConfig& cfg, Direction direction,
                                   std::size_t point_index);

struct DipScanResult {
  Direction direction = Direction::AtoB;
  std::vector<ScanPoint> scan;
  DipFit fit;
  std::size_t nearest_index = 0;  // grid point closest to the fitted center
};

struct DirectionResult {
  DipScanResult dip;
  std::vector<CorrelationPoint> correlation;
  int index_offset = 0;    // argmin of the correlation scan
  int pairing_offset = 0;  // index difference of the physical pairs at that point
};

/// Scan and fit one direction. Errors carry the stage in their message.
DipScanResult run_dip_scan(const ExperimentConfig& cfg, Direction direction);

/// Scan, fit, then correlation analysis on the frame nearest the optimum.
DirectionResult run_direction(const ExperimentConfig& cfg, Direction direction);

struct SyncResult {
  DirectionResult a_to_b;
  DirectionResult b_to_a;
  OffsetEstimate estimate;
  double delta_true = 0.0;
  double accuracy = 0.0;        // |delta_hat - delta_true|
  double predicted_bias = 0.0;  // asymmetry_bias of the configured channel
};

SyncResult run_sync(const ExperimentConfig& cfg);

struct ChannelCheck {
  std::string label;
  PostselectedCounts counts;
  DetectionVerdict verdict;
};

struct SecurityResult {
  ChannelCheck honest;
  ChannelCheck attacked;
  std::vector<SweepRow> sweep;
  std::vector<AttackDipRow> dip;
  std::vector<std::string> warnings;
};

/// Balanced A->B frames over an honest and an intercept-resend channel,
/// the detection verdict for each, and the sweep / dip tables. Throws
/// InsufficientDataError when a channel yields no post-selected trials.
SecurityResult run_security(const ExperimentConfig& cfg);

struct CurveRow {
  std::string family;  // "mu_phi" or "sigma_t"
  double mu = 0.0;
  double phi = 0.0;
  double sigma_t = 0.0;
  double tau = 0.0;
  double probability = 0.0;
};

/// Analytic coincidence probability versus delay over the configured
/// (mu, phi) grid at fixed width, and over the width grid at mu = 1, phi = 0.
std::vector<CurveRow> run_curves(const ExperimentConfig& cfg);

}  // namespace homsync
