#include "homsync/security.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "homsync/errors.hpp"
#include "homsync/interference.hpp"

namespace homsync {
namespace {

double ratio(std::int64_t num, std::int64_t den) {
  return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

// Plain binomial error bar for reporting; no rule-of-three fallback.
double error_bar(const PostselectedCounts& c) {
  if (c.trials <= 0) return 0.0;
  const double p = c.rate();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(c.trials));
}

}  // namespace

Bb84State resend_after_measurement(Bb84State state, Basis eve_basis, Engine& rng) {
  if (basis_of(state) == eve_basis) return state;
  std::bernoulli_distribution coin(0.5);
  return states_of(eve_basis)[coin(rng) ? 1 : 0];
}

Bb84State ir_transform(Bb84State state, Engine& rng) {
  std::bernoulli_distribution coin(0.5);
  const Basis eve = coin(rng) ? Basis::Diagonal : Basis::Rectilinear;
  return resend_after_measurement(state, eve, rng);
}

double ir_postselected_probability(double mu, double temporal_factor) {
  return 0.5 * coincidence_probability(mu, temporal_factor) +
         0.5 * coincidence_probability(mu, temporal_factor / std::numbers::sqrt2);
}

double ir_postselected_floor(double mu) {
  if (!(mu >= 0.0)) throw std::domain_error("ir_postselected_floor: mu must be >= 0");
  return ir_postselected_probability(mu, 1.0);
}

DetectionVerdict detect_eavesdropper(double observed_rate, std::int64_t n_trials, double mu,
                                     double significance) {
  if (n_trials <= 0) {
    throw InsufficientDataError("detect_eavesdropper: no post-selected trials");
  }
  if (!(significance > 0.0 && significance < 0.5)) {
    throw std::domain_error("detect_eavesdropper: significance must lie in (0, 0.5)");
  }
  DetectionVerdict v;
  v.observed_rate = observed_rate;
  v.n_trials = n_trials;
  v.honest_floor = postselected_min(mu);
  v.attacked_floor = ir_postselected_floor(mu);

  const double p = v.honest_floor;
  const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n_trials));
  const boost::math::normal_distribution<double> standard;
  const double z = boost::math::quantile(boost::math::complement(standard, significance));
  const double midpoint = 0.5 * (v.honest_floor + v.attacked_floor);
  v.threshold = std::min(p + z * sigma, midpoint);

  if (sigma > 0.0) {
    v.z_score = (observed_rate - p) / sigma;
  } else if (observed_rate != p) {
    v.z_score = std::copysign(std::numeric_limits<double>::infinity(), observed_rate - p);
  }
  v.flagged = observed_rate > v.threshold;
  return v;
}

double PostselectedCounts::rate() const { return ratio(coincidences, trials); }
double PostselectedCounts::rect_rate() const { return ratio(rect_coincidences, rect_trials); }
double PostselectedCounts::diag_rate() const { return ratio(diag_coincidences, diag_trials); }

PostselectedCounts sample_postselected(double mu, double temporal_factor, AttackKind attack,
                                       std::int64_t trials, Engine& rng) {
  PostselectedCounts counts;
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Only two overlap values occur, so evaluate them once.
  const double p_matched = coincidence_probability(mu, temporal_factor);
  const double p_cross = coincidence_probability(mu, temporal_factor / std::numbers::sqrt2);
  for (std::int64_t i = 0; i < trials; ++i) {
    const auto prepared = static_cast<Bb84State>(pick(rng));
    const Bb84State arriving =
        attack == AttackKind::InterceptResend ? ir_transform(prepared, rng) : prepared;
    const double overlap = polarization_overlap(arriving, prepared);
    const double p = overlap == 1.0 ? p_matched
                     : overlap == 0.0 ? coincidence_probability(mu, 0.0)
                                      : p_cross;
    const bool hit = unit(rng) < p;
    ++counts.trials;
    counts.coincidences += hit;
    if (basis_of(prepared) == Basis::Rectilinear) {
      ++counts.rect_trials;
      counts.rect_coincidences += hit;
    } else {
      ++counts.diag_trials;
      counts.diag_coincidences += hit;
    }
  }
  return counts;
}

std::vector<SweepRow> attack_sweep(std::span<const double> mu_values, std::int64_t trials_per_point,
                                   std::uint64_t seed) {
  std::vector<SweepRow> rows;
  rows.reserve(mu_values.size());
  for (std::size_t i = 0; i < mu_values.size(); ++i) {
    const double mu = mu_values[i];
    SweepRow row;
    row.mu = mu;
    row.honest_analytic = postselected_min(mu);
    row.ir_analytic = ir_postselected_floor(mu);
    row.floor_uncorrelated = expected_floor(mu);

    auto honest_rng = make_engine(derive_seed(seed, StreamPurpose::SweepPoint, Direction::AtoB, i, 0));
    const auto honest = sample_postselected(mu, 1.0, AttackKind::None, trials_per_point, honest_rng);
    row.honest_mc = honest.rate();
    row.honest_err = error_bar(honest);

    auto ir_rng = make_engine(derive_seed(seed, StreamPurpose::SweepPoint, Direction::AtoB, i, 1));
    const auto ir =
        sample_postselected(mu, 1.0, AttackKind::InterceptResend, trials_per_point, ir_rng);
    row.ir_mc = ir.rate();
    row.ir_err = error_bar(ir);
    rows.push_back(row);
  }
  return rows;
}

std::vector<AttackDipRow> attack_dip(double mu, double sigma_spec, std::span<const double> taus,
                                     std::int64_t trials_per_point, std::uint64_t seed) {
  std::vector<AttackDipRow> rows;
  rows.reserve(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double factor = temporal_overlap(taus[i], sigma_spec);
    AttackDipRow row;
    row.tau = taus[i];
    row.honest_analytic = coincidence_probability(mu, factor);
    row.ir_analytic = ir_postselected_probability(mu, factor);

    auto honest_rng = make_engine(derive_seed(seed, StreamPurpose::AttackDip, Direction::AtoB, i, 0));
    const auto honest = sample_postselected(mu, factor, AttackKind::None, trials_per_point, honest_rng);
    row.honest_mc = honest.rate();
    row.honest_err = error_bar(honest);

    auto ir_rng = make_engine(derive_seed(seed, StreamPurpose::AttackDip, Direction::AtoB, i, 1));
    const auto ir =
        sample_postselected(mu, factor, AttackKind::InterceptResend, trials_per_point, ir_rng);
    row.ir_mc = ir.rate();
    row.ir_err = error_bar(ir);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace homsync
