#include "homsync/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "homsync/errors.hpp"
#include "homsync/interference.hpp"
#include "homsync/rng.hpp"
#include "homsync/simulator.hpp"

namespace homsync {
namespace {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
// written to per-index slots; the first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> symmetric_grid(double center, double half_span, double step) {
  const auto n = static_cast<long>(std::floor(half_span / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(2 * n + 1));
  for (long i = -n; i <= n; ++i) grid.push_back(center + static_cast<double>(i) * step);
  return grid;
}

// Re-raise with the pipeline stage prepended, keeping the error type.
template <class Fn>
auto in_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const FitError& e) {
    throw FitError(stage + ": " + e.what(), e.last_iterate(), e.iterations());
  } catch (const NoDipError& e) {
    throw NoDipError(stage + ": " + e.what());
  } catch (const InsufficientDataError& e) {
    throw InsufficientDataError(stage + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(stage + ": " + e.what());
  }
}

std::string stage_name(const char* stage, Direction d) {
  return std::string(stage) + " " + std::string(to_string(d));
}

ChannelCheck check_channel(const ExperimentConfig& base, AttackKind kind, const char* label) {
  ExperimentConfig cfg = base;
  cfg.attack.kind = kind;
  const double delay = balanced_local_delay(cfg, Direction::AtoB);
  const auto purpose_point = kind == AttackKind::None ? 0u : 1u;

  ChannelCheck check;
  check.label = label;
  for (int f = 0; f < cfg.scan.frames; ++f) {
    const auto seed = derive_seed(cfg.seed, StreamPurpose::SecurityFrame, Direction::AtoB,
                                  purpose_point, static_cast<std::uint64_t>(f));
    const auto counts = simulate_postselected_counts(cfg, Direction::AtoB, delay, seed);
    check.counts.trials += counts.trials;
    check.counts.coincidences += counts.coincidences;
    check.counts.rect_trials += counts.rect_trials;
    check.counts.rect_coincidences += counts.rect_coincidences;
    check.counts.diag_trials += counts.diag_trials;
    check.counts.diag_coincidences += counts.diag_coincidences;
  }
  check.verdict = detect_eavesdropper(check.counts.rate(), check.counts.trials, effective_mu(cfg),
                                      cfg.security.significance);
  return check;
}

}  // namespace

std::vector<double> vdl_grid(const ExperimentConfig& cfg, Direction direction) {
  return symmetric_grid(expected_local_delay(cfg, direction), scan_half_span(cfg),
                        cfg.scan.vdl_step);
}

double balanced_local_delay(const ExperimentConfig& cfg, Direction direction) {
  const double period = cfg.source.rep_period;
  const double aligned = direction == Direction::AtoB
                             ? cfg.channel.prop_delay_ab + cfg.clocks.delta_true
                             : cfg.channel.prop_delay_ba - cfg.clocks.delta_true;
  const double expected = expected_local_delay(cfg, direction);
  return aligned - period * std::round((aligned - expected) / period);
}

std::vector<FrameRecord> frames_at(const ExperimentConfig& cfg, Direction direction,
                                   std::size_t point_index) {
  const auto grid = vdl_grid(cfg, direction);
  std::vector<FrameRecord> frames;
  if (point_index >= grid.size()) return frames;
  for (int f = 0; f < cfg.scan.frames; ++f) {
    const auto seed = derive_seed(cfg.seed, StreamPurpose::Frame, direction, point_index,
                                  static_cast<std::uint64_t>(f));
    frames.push_back(simulate_frame(cfg, direction, grid[point_index], seed));
  }
  return frames;
}

std::vector<ScanPoint> run_vdl_scan(const ExperimentConfig& cfg, Direction direction) {
  const auto grid = vdl_grid(cfg, direction);
  std::vector<ScanPoint> points(grid.size());
  parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
    std::int64_t trials = 0;
    std::int64_t hits = 0;
    for (int f = 0; f < cfg.scan.frames; ++f) {
      const auto seed =
          derive_seed(cfg.seed, StreamPurpose::Frame, direction, i, static_cast<std::uint64_t>(f));
      const auto counts = simulate_postselected_counts(cfg, direction, grid[i], seed);
      trials += counts.trials;
      hits += counts.coincidences;
    }
    points[i] = make_scan_point(grid[i], hits, trials);
  });
  return points;
}

DipScanResult run_dip_scan(const ExperimentConfig& cfg, Direction direction) {
  return in_stage(stage_name("dip-scan", direction), [&] {
    DipScanResult result;
    result.direction = direction;
    result.scan = run_vdl_scan(cfg, direction);
    for (const auto& pt : result.scan) {
      if (pt.n_trials == 0) throw InsufficientDataError("scan point without post-selected trials");
    }
    result.fit = fit_inverted_gaussian(result.scan);
    const auto nearest = std::min_element(
        result.scan.begin(), result.scan.end(), [&](const ScanPoint& a, const ScanPoint& b) {
          return std::fabs(a.delay - result.fit.center) < std::fabs(b.delay - result.fit.center);
        });
    result.nearest_index = static_cast<std::size_t>(nearest - result.scan.begin());
    return result;
  });
}

DirectionResult run_direction(const ExperimentConfig& cfg, Direction direction) {
  DirectionResult result;
  result.dip = run_dip_scan(cfg, direction);
  in_stage(stage_name("correlation", direction), [&] {
    const auto frames = frames_at(cfg, direction, result.dip.nearest_index);
    result.pairing_offset = frames.empty() ? 0 : dominant_index_offset(frames.front()).value_or(0);
    const KRange range{-cfg.scan.k_range, cfg.scan.k_range};
    result.correlation = correlation_scan(frames, range);
    const auto k = correlation_argmin(result.correlation);
    if (!k) throw InsufficientDataError("no post-selected trials for any index offset");
    result.index_offset = *k;
  });
  return result;
}

SyncResult run_sync(const ExperimentConfig& cfg) {
  SyncResult result;
  result.a_to_b = run_direction(cfg, Direction::AtoB);
  result.b_to_a = run_direction(cfg, Direction::BtoA);
  // A->B balances Bob's delay line, B->A Alice's.
  result.estimate = estimate_offset(result.b_to_a.dip.fit, result.a_to_b.dip.fit,
                                    result.a_to_b.index_offset, result.b_to_a.index_offset,
                                    cfg.source.rep_period);
  result.delta_true = cfg.clocks.delta_true;
  result.accuracy = std::fabs(result.estimate.delta_hat - result.delta_true);
  result.predicted_bias = asymmetry_bias(cfg.channel.prop_delay_ab, cfg.channel.prop_delay_ba);
  return result;
}

SecurityResult run_security(const ExperimentConfig& cfg) {
  SecurityResult result;
  result.honest = in_stage("security honest", [&] {
    return check_channel(cfg, AttackKind::None, "honest");
  });
  result.attacked = in_stage("security intercept-resend", [&] {
    return check_channel(cfg, AttackKind::InterceptResend, "intercept_resend");
  });
  constexpr std::int64_t kMinTrials = 1000;
  for (const auto* check : {&result.honest, &result.attacked}) {
    if (check->counts.trials < kMinTrials) {
      result.warnings.push_back(check->label + ": only " + std::to_string(check->counts.trials) +
                                " post-selected trials; verdict is weak");
    }
  }
  result.sweep = attack_sweep(cfg.security.mu_values, cfg.security.trials_per_point, cfg.seed);
  const auto taus = symmetric_grid(0.0, cfg.security.tau_span, cfg.security.tau_step);
  result.dip = attack_dip(effective_mu(cfg), sigma_spec(cfg), taus, cfg.security.trials_per_point,
                          cfg.seed);
  return result;
}

std::vector<CurveRow> run_curves(const ExperimentConfig& cfg) {
  const auto& cv = cfg.curves;
  const auto taus = symmetric_grid(0.0, cv.tau_span, cv.tau_step);
  const auto convention = cfg.source.width_convention;
  std::vector<CurveRow> rows;

  const double fixed_sigma = spectral_sigma(cv.fixed_sigma_t, convention);
  for (double mu : cv.mu_values) {
    for (double phi : cv.phi_values) {
      const double cos_phi = std::clamp(std::cos(phi), 0.0, 1.0);
      for (double tau : taus) {
        const double s = mode_overlap({cos_phi, tau, fixed_sigma});
        rows.push_back({"mu_phi", mu, phi, cv.fixed_sigma_t, tau, coincidence_probability(mu, s)});
      }
    }
  }
  for (double width : cv.sigma_t_values) {
    const double sigma = spectral_sigma(width, convention);
    for (double tau : taus) {
      const double s = mode_overlap({1.0, tau, sigma});
      rows.push_back({"sigma_t", 1.0, 0.0, width, tau, coincidence_probability(1.0, s)});
    }
  }
  return rows;
}

}  // namespace homsync
