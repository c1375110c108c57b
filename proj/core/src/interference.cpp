#include "homsync/interference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "homsync/bessel.hpp"

namespace homsync {
namespace {

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

void require_mu(double mu, const char* who) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::domain_error(std::string(who) + ": mean photon number must be finite and >= 0");
  }
}

void validate(const SourcePair& pair) {
  require_mu(pair.mu_a, "coincidence_probability");
  require_mu(pair.mu_b, "coincidence_probability");
  const double t = pair.transmittance;
  const double r = pair.reflectance;
  if (!(t >= 0.0 && t <= 1.0 && r >= 0.0 && r <= 1.0) || std::fabs(t + r - 1.0) > 1e-12) {
    throw std::domain_error("coincidence_probability: need T, R in [0,1] with T + R = 1");
  }
}

}  // namespace

double temporal_stddev(double temporal_width, WidthConvention convention) {
  if (!(temporal_width > 0.0)) throw std::domain_error("temporal width must be > 0");
  return convention == WidthConvention::Fwhm ? temporal_width / kFwhmPerSigma : temporal_width;
}

double spectral_sigma(double temporal_width, WidthConvention convention) {
  return 1.0 / (2.0 * temporal_stddev(temporal_width, convention));
}

double temporal_overlap(double tau, double sigma_spec) {
  const double x = sigma_spec * tau;
  return std::exp(-0.5 * x * x);
}

double mode_overlap(const OverlapParams& params) {
  if (!(params.cos_phi >= 0.0 && params.cos_phi <= 1.0)) {
    throw std::domain_error("mode_overlap: cos_phi must lie in [0, 1]");
  }
  if (!(params.sigma_spec > 0.0)) throw std::domain_error("mode_overlap: sigma_spec must be > 0");
  return params.cos_phi * temporal_overlap(params.tau, params.sigma_spec);
}

CoincidenceModel::CoincidenceModel(const SourcePair& pair) {
  validate(pair);
  const double t = pair.transmittance;
  const double r = pair.reflectance;
  // Mean photon numbers reaching each output port.
  const double u = t * pair.mu_a + r * pair.mu_b;
  const double v = r * pair.mu_a + t * pair.mu_b;
  // 1 + e^{-u-v} - e^{-u} - e^{-v} == expm1(-u) * expm1(-v), keeps precision
  // for small mu.
  distinguishable_ = std::expm1(-u) * std::expm1(-v);
  bessel_weight_ = std::exp(-u) + std::exp(-v);
  bessel_scale_ = 2.0 * std::sqrt(pair.mu_a * pair.mu_b * r * t);
}

double CoincidenceModel::operator()(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::domain_error("coincidence_probability: overlap s must lie in [0, 1]");
  }
  return clamp_probability(distinguishable_ - bessel_weight_ * bessel_i0m1(bessel_scale_ * s));
}

double coincidence_probability(const SourcePair& pair, double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::domain_error("coincidence_probability: overlap s must lie in [0, 1]");
  }
  return CoincidenceModel(pair)(s);
}

double coincidence_probability(double mu, double s) {
  return coincidence_probability(SourcePair::balanced(mu), s);
}

double distinguishable_probability(double mu) {
  require_mu(mu, "distinguishable_probability");
  const double e = std::expm1(-mu);
  return clamp_probability(e * e);
}

double expected_floor(double mu) {
  require_mu(mu, "expected_floor");
  // Weights 1/4, 1/4, 1/2 for cos_phi = 1, 0, 1/sqrt(2).
  const double e = std::expm1(-mu);
  const double bracket = bessel_i0m1(mu) + 2.0 * bessel_i0m1(mu / std::numbers::sqrt2);
  return clamp_probability(e * e - 0.5 * std::exp(-mu) * bracket);
}

double postselected_min(double mu) {
  require_mu(mu, "postselected_min");
  return coincidence_probability(mu, 1.0);
}

double visibility(double mu) {
  require_mu(mu, "visibility");
  if (mu < 1e-6) {
    // (mu^2/4 + mu^4/64) / (2 (mu^2/4 + mu^4/48))
    const double m2 = mu * mu;
    return 0.5 * (1.0 + m2 / 16.0) / (1.0 + m2 / 12.0);
  }
  const double sh = std::sinh(0.5 * mu);
  return bessel_i0m1(mu) / (2.0 * sh * sh);
}

}  // namespace homsync
