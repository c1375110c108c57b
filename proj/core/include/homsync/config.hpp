#pragma once

// Experiment configuration. Defaults reproduce the reference experiment:
// N = 1e5 pulses per delay setting, 10 MHz repetition, effective mean photon
// number 1.0 at the beamsplitter, 10 ns temporal width, 150 ps detector
// jitter, 50 us propagation delay each way, 180 ps delay-line step and a
// true clock offset of 230.456 ns.
//
// Times are in nanoseconds unless a field name says otherwise.

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "homsync/interference.hpp"

namespace homsync {

enum class Party { Alice, Bob };
enum class Direction { AtoB, BtoA };
enum class JitterModel { BothDetectors, SingleDetector };
enum class AttackKind { None, InterceptResend };
enum class EveBasisStrategy { UniformRandom };
enum class OutputFormat { Csv, Json };

/// mu_source * 10^(-loss_db / 10) * efficiency. Throws std::domain_error on
/// negative input or efficiency above one.
double effective_mu(double mu_source, double loss_db, double efficiency);

/// Inverse of effective_mu for a requested mean photon number at the
/// beamsplitter.
double source_mu_for(double mu_effective, double loss_db, double efficiency);

inline constexpr double kDefaultLossDb = 2.0;
inline constexpr double kDefaultEfficiency = 0.85;

/// Bob's clock reads t_B = t_A + delta_true.
struct ClockPair {
  double delta_true = 230.456;
};

struct SourceConfig {
  std::int64_t n_pulses = 100'000;
  double rep_period = 100.0;
  double mu_source = source_mu_for(1.0, kDefaultLossDb, kDefaultEfficiency);
  double temporal_width = 10.0;
  WidthConvention width_convention = WidthConvention::StdDev;
  double wavelength_nm = 1550.0;  // metadata only
};

struct ChannelConfig {
  double prop_delay_ab = 5.0e4;
  double prop_delay_ba = 5.0e4;
  double loss_db = kDefaultLossDb;
  // When set, prop_delay_ba is forced equal to prop_delay_ab at validation.
  bool reciprocal = true;
};

struct DetectorConfig {
  double efficiency = kDefaultEfficiency;
  double jitter_fwhm_ps = 150.0;
  double dark_count_probability = 0.0;  // per pulse pair, off by default
  JitterModel jitter_model = JitterModel::BothDetectors;
};

struct ScanConfig {
  double vdl_step = 0.18;
  // Half-span of the delay scan around the expected center; unset means
  // five temporal standard deviations.
  std::optional<double> vdl_span;
  int k_range = 10;
  int frames = 1;
  // Resolution of the coarse offset knowledge used to center the scan.
  double coarse_resolution = 1.0;
};

struct AttackConfig {
  AttackKind kind = AttackKind::None;
  EveBasisStrategy eve_basis_strategy = EveBasisStrategy::UniformRandom;
};

struct SecurityConfig {
  double significance = 0.00135;  // one-sided 3 sigma
  std::vector<double> mu_values{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0,
                                1.2, 1.4, 1.6, 1.8, 2.0};
  std::int64_t trials_per_point = 20'000;
  double tau_span = 40.0;
  double tau_step = 2.0;
};

struct CurvesConfig {
  std::vector<double> mu_values{0.1, 0.5, 1.0, 2.0};
  std::vector<double> phi_values{0.0, std::numbers::pi / 8, std::numbers::pi / 4,
                                 3 * std::numbers::pi / 8, std::numbers::pi / 2};
  std::vector<double> sigma_t_values{5.0, 10.0, 20.0};
  double fixed_sigma_t = 10.0;
  double tau_span = 60.0;
  double tau_step = 0.5;
};

struct OutputConfig {
  OutputFormat format = OutputFormat::Csv;
  std::string path = ".";
};

struct ExperimentConfig {
  SourceConfig source;
  ChannelConfig channel;
  DetectorConfig detector;
  ClockPair clocks;
  ScanConfig scan;
  AttackConfig attack;
  SecurityConfig security;
  CurvesConfig curves;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
  OutputConfig output;
};

/// Checks every invariant and normalizes the reciprocal flag. Throws
/// ConfigError with the offending field name.
void validate(ExperimentConfig& cfg);

double effective_mu(const ExperimentConfig& cfg);
double sigma_spec(const ExperimentConfig& cfg);
double temporal_stddev(const ExperimentConfig& cfg);
double scan_half_span(const ExperimentConfig& cfg);

std::string_view to_string(Direction d) noexcept;
std::string_view to_string(Party p) noexcept;

}  // namespace homsync
