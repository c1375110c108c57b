#include "homsync/config.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "homsync/errors.hpp"

namespace homsync {
namespace {

double transmission(double loss_db) { return std::pow(10.0, -loss_db / 10.0); }

void check(bool ok, const std::string& field, const std::string& rule) {
  if (!ok) throw ConfigError(field + ": " + rule);
}

}  // namespace

double effective_mu(double mu_source, double loss_db, double efficiency) {
  if (!(mu_source >= 0.0) || !(loss_db >= 0.0) || !(efficiency >= 0.0) || !(efficiency <= 1.0)) {
    throw std::domain_error("effective_mu: arguments must be >= 0 with efficiency <= 1");
  }
  return mu_source * transmission(loss_db) * efficiency;
}

double source_mu_for(double mu_effective, double loss_db, double efficiency) {
  if (!(mu_effective >= 0.0) || !(loss_db >= 0.0) || !(efficiency > 0.0) || !(efficiency <= 1.0)) {
    throw std::domain_error("source_mu_for: need mu >= 0, loss >= 0, efficiency in (0, 1]");
  }
  return mu_effective / (transmission(loss_db) * efficiency);
}

void validate(ExperimentConfig& cfg) {
  const auto& s = cfg.source;
  check(s.n_pulses >= 0, "source.n_pulses", "must be >= 0");
  check(s.rep_period > 0.0 && std::isfinite(s.rep_period), "source.rep_period", "must be > 0");
  check(s.mu_source >= 0.0 && std::isfinite(s.mu_source), "source.mu_source", "must be >= 0");
  check(s.temporal_width > 0.0 && std::isfinite(s.temporal_width), "source.temporal_width",
        "must be > 0");

  auto& c = cfg.channel;
  check(c.prop_delay_ab >= 0.0 && std::isfinite(c.prop_delay_ab), "channel.prop_delay_ab",
        "must be >= 0");
  check(c.prop_delay_ba >= 0.0 && std::isfinite(c.prop_delay_ba), "channel.prop_delay_ba",
        "must be >= 0");
  check(c.loss_db >= 0.0, "channel.loss_db", "must be >= 0");
  if (c.reciprocal) c.prop_delay_ba = c.prop_delay_ab;

  const auto& d = cfg.detector;
  check(d.efficiency > 0.0 && d.efficiency <= 1.0, "detector.efficiency", "must lie in (0, 1]");
  check(d.jitter_fwhm_ps >= 0.0, "detector.jitter_fwhm_ps", "must be >= 0");
  check(d.dark_count_probability >= 0.0 && d.dark_count_probability <= 1.0,
        "detector.dark_count_probability", "must lie in [0, 1]");

  check(std::isfinite(cfg.clocks.delta_true), "clocks.delta_true", "must be finite");

  const auto& sc = cfg.scan;
  check(sc.vdl_step > 0.0, "scan.vdl_step", "must be > 0");
  check(!sc.vdl_span || *sc.vdl_span >= 0.0, "scan.vdl_span", "must be >= 0");
  check(sc.k_range >= 0, "scan.k_range", "must be >= 0");
  check(sc.frames >= 1, "scan.frames", "must be >= 1");
  check(sc.coarse_resolution > 0.0, "scan.coarse_resolution", "must be > 0");

  const auto& sec = cfg.security;
  check(sec.significance > 0.0 && sec.significance < 0.5, "security.significance",
        "must lie in (0, 0.5)");
  check(sec.trials_per_point >= 0, "security.trials_per_point", "must be >= 0");
  for (double mu : sec.mu_values) check(mu >= 0.0, "security.mu_values", "entries must be >= 0");
  check(sec.tau_step > 0.0 && sec.tau_span >= 0.0, "security.tau_step/tau_span",
        "need step > 0 and span >= 0");

  const auto& cv = cfg.curves;
  for (double mu : cv.mu_values) check(mu >= 0.0, "curves.mu_values", "entries must be >= 0");
  for (double phi : cv.phi_values) {
    check(phi >= 0.0 && phi <= std::numbers::pi / 2 + 1e-12, "curves.phi_values",
          "entries must lie in [0, pi/2]");
  }
  for (double w : cv.sigma_t_values) check(w > 0.0, "curves.sigma_t_values", "entries must be > 0");
  check(cv.fixed_sigma_t > 0.0, "curves.fixed_sigma_t", "must be > 0");
  check(cv.tau_step > 0.0 && cv.tau_span >= 0.0, "curves.tau_step/tau_span",
        "need step > 0 and span >= 0");
}

double effective_mu(const ExperimentConfig& cfg) {
  return effective_mu(cfg.source.mu_source, cfg.channel.loss_db, cfg.detector.efficiency);
}

double sigma_spec(const ExperimentConfig& cfg) {
  return spectral_sigma(cfg.source.temporal_width, cfg.source.width_convention);
}

double temporal_stddev(const ExperimentConfig& cfg) {
  return temporal_stddev(cfg.source.temporal_width, cfg.source.width_convention);
}

double scan_half_span(const ExperimentConfig& cfg) {
  return cfg.scan.vdl_span.value_or(5.0 * temporal_stddev(cfg));
}

std::string_view to_string(Direction d) noexcept {
  return d == Direction::AtoB ? "A->B" : "B->A";
}

std::string_view to_string(Party p) noexcept { return p == Party::Alice ? "Alice" : "Bob"; }

}  // namespace homsync
