#include "homsync/simulator.hpp"

#include <cmath>
#include <random>

#include "homsync/errors.hpp"
#include "homsync/interference.hpp"
#include "homsync/schedule.hpp"

namespace homsync {

std::int64_t FrameRecord::coincidences() const {
  std::int64_t n = 0;
  for (const auto& p : pairs) n += p.coincided;
  return n;
}

PostselectedCounts postselected_counts(const FrameRecord& frame) {
  PostselectedCounts c;
  for (const auto& p : frame.pairs) {
    if (p.remote_state != p.local_state) continue;
    ++c.trials;
    c.coincidences += p.coincided;
    if (basis_of(p.local_state) == Basis::Rectilinear) {
      ++c.rect_trials;
      c.rect_coincidences += p.coincided;
    } else {
      ++c.diag_trials;
      c.diag_coincidences += p.coincided;
    }
  }
  return c;
}

double sample_jitter(double fwhm_ps, Engine& rng) {
  if (fwhm_ps == 0.0) return 0.0;
  std::normal_distribution<double> gauss(0.0, fwhm_ps / kFwhmPerSigma);
  return gauss(rng);
}

double expected_local_delay(const ExperimentConfig& cfg, Direction direction) {
  const double period = cfg.source.rep_period;
  const double res = cfg.scan.coarse_resolution;
  const double coarse = std::round(cfg.clocks.delta_true / res) * res;
  const double wrapped = coarse - period * std::round(coarse / period);
  const double nominal = 0.5 * (cfg.channel.prop_delay_ab + cfg.channel.prop_delay_ba);
  return direction == Direction::AtoB ? nominal + wrapped : nominal - wrapped;
}

namespace {

// Simulates one frame and hands every pair to `sink` in remote-index order.
// Returns false when the source emits nothing.
template <class Sink>
bool run_frame(const ExperimentConfig& cfg, Direction direction, double vdl_setting,
               std::uint64_t seed, Sink&& sink) {
  const double mu = effective_mu(cfg);
  if (!(mu > 0.0)) throw ConfigError("simulate_frame: effective mean photon number must be > 0");
  if (cfg.source.n_pulses <= 0) return false;

  Engine rng = make_engine(seed);
  const auto alice = emission_schedule(Party::Alice, cfg.source, cfg.clocks, rng);
  const auto bob = emission_schedule(Party::Bob, cfg.source, cfg.clocks, rng);

  const bool a_to_b = direction == Direction::AtoB;
  const auto& remote = a_to_b ? alice : bob;
  const auto& local = a_to_b ? bob : alice;
  const ArrivalOffsets offsets{a_to_b ? cfg.channel.prop_delay_ab : cfg.channel.prop_delay_ba,
                               vdl_setting};
  const auto matches = pair_pulses(remote, local, offsets, 0.5 * cfg.source.rep_period);

  const double sigma = sigma_spec(cfg);
  const double jitter_fwhm = cfg.detector.jitter_fwhm_ps;
  const bool two_detectors = cfg.detector.jitter_model == JitterModel::BothDetectors;
  const double dark = cfg.detector.dark_count_probability;
  const bool attacked = cfg.attack.kind == AttackKind::InterceptResend;
  const auto first_remote = remote.front().index;
  const auto first_local = local.front().index;
  const CoincidenceModel probability(mu);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, jitter_fwhm / kFwhmPerSigma);
  const auto draw_jitter = [&] { return jitter_fwhm == 0.0 ? 0.0 : jitter(rng); };

  for (const auto& m : matches) {
    const auto& r = remote[static_cast<std::size_t>(m.remote_index - first_remote)];
    const auto& l = local[static_cast<std::size_t>(m.local_index - first_local)];

    double jitter_ps = draw_jitter();
    if (two_detectors) jitter_ps -= draw_jitter();
    const double tau = m.separation + 1e-3 * jitter_ps;

    const Bb84State arriving = attacked ? ir_transform(r.state, rng) : r.state;
    const double s = polarization_overlap(arriving, l.state) * temporal_overlap(tau, sigma);
    double p = probability(s);
    if (dark > 0.0) p = 1.0 - (1.0 - p) * (1.0 - dark);

    sink(PairEvent{r.index, l.index, tau, r.state, l.state, arriving, unit(rng) < p},
         matches.size());
  }
  return true;
}

}  // namespace

FrameRecord simulate_frame(const ExperimentConfig& cfg, Direction direction, double vdl_setting,
                           std::uint64_t seed) {
  FrameRecord frame;
  frame.direction = direction;
  frame.vdl_setting = vdl_setting;
  run_frame(cfg, direction, vdl_setting, seed, [&](const PairEvent& ev, std::size_t total) {
    if (frame.pairs.empty()) frame.pairs.reserve(total);
    frame.pairs.push_back(ev);
  });
  frame.n_trials = static_cast<std::int64_t>(frame.pairs.size());
  return frame;
}

PostselectedCounts simulate_postselected_counts(const ExperimentConfig& cfg, Direction direction,
                                                double vdl_setting, std::uint64_t seed) {
  PostselectedCounts c;
  run_frame(cfg, direction, vdl_setting, seed, [&](const PairEvent& p, std::size_t) {
    if (p.remote_state != p.local_state) return;
    ++c.trials;
    c.coincidences += p.coincided;
    if (basis_of(p.local_state) == Basis::Rectilinear) {
      ++c.rect_trials;
      c.rect_coincidences += p.coincided;
    } else {
      ++c.diag_trials;
      c.diag_coincidences += p.coincided;
    }
  });
  return c;
}

}  // namespace homsync
