#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "homsync/correlation.hpp"
#include "homsync/errors.hpp"
#include "homsync/fit.hpp"
#include "homsync/interference.hpp"
#include "homsync/offset.hpp"
#include "homsync/rng.hpp"
#include "homsync/scan.hpp"
#include "homsync/simulator.hpp"

using namespace homsync;

namespace {

std::vector<double> grid(double center, double half_span, double step) {
  std::vector<double> d;
  const int n = static_cast<int>(std::floor(half_span / step + 1e-9));
  for (int i = -n; i <= n; ++i) d.push_back(center + i * step);
  return d;
}

std::vector<ScanPoint> noiseless(double b, double a, double d0, double w) {
  std::vector<ScanPoint> pts;
  for (double d : grid(d0 + 0.37, 50.0, 0.18))
    pts.push_back({d, inverted_gaussian(d, b, a, d0, w), 0.003, 25000, 0});
  return pts;
}

// Post-selected scan with binomial noise from the physical dip at mu = 1.
std::vector<ScanPoint> noisy_scan(double true_center, std::int64_t trials, std::uint64_t seed) {
  Engine rng = make_engine(seed);
  std::vector<ScanPoint> pts;
  for (double d : grid(50030.0, 50.0, 0.18)) {
    const double p = coincidence_probability(1.0, temporal_overlap(d - true_center, 0.05));
    std::binomial_distribution<std::int64_t> draw(trials, p);
    pts.push_back(make_scan_point(d, draw(rng), trials));
  }
  return pts;
}

}  // namespace

TEST_CASE("binomial standard error") {
  CHECK(binomial_stderr(25, 100) == doctest::Approx(std::sqrt(0.25 * 0.75 / 100)));
  CHECK(binomial_stderr(0, 100) == doctest::Approx(0.03));
  CHECK(binomial_stderr(100, 100) == doctest::Approx(0.03));
  CHECK(binomial_stderr(0, 0) == 0.0);
}

TEST_CASE("fit recovers an exact inverted Gaussian") {
  const auto fit = fit_inverted_gaussian(noiseless(0.4, 0.2, 50030.513, 10.0));
  CHECK(fit.baseline == doctest::Approx(0.4).epsilon(1e-6));
  CHECK(fit.depth == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(fit.center == doctest::Approx(50030.513).epsilon(1e-6));
  CHECK(std::abs(fit.center - 50030.513) < 1e-6);
  CHECK(fit.width == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(fit.chi_square < 1e-12);
  CHECK(fit.degrees_of_freedom == 555 - 4);
  CHECK(fit.center_stderr == doctest::Approx(fit.stderr_of(DipFit::kCenter)));
  CHECK(fit.minimum() == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("fit failures") {
  auto flat = noiseless(0.4, 0.2, 50030.513, 10.0);
  for (auto& p : flat) p.rate = 0.4;
  CHECK_THROWS_AS(fit_inverted_gaussian(flat), NoDipError);

  auto few = noiseless(0.4, 0.2, 50030.0, 10.0);
  few.resize(4);
  CHECK_THROWS_AS(fit_inverted_gaussian(few), NoDipError);

  auto bump = noiseless(0.2, -0.2, 50030.0, 10.0);
  CHECK_THROWS_AS(fit_inverted_gaussian(bump), NoDipError);

  FitOptions one;
  one.max_iterations = 1;
  const auto noisy = noisy_scan(50031.7, 25000, 3);
  try {
    fit_inverted_gaussian(noisy, one);
    FAIL("expected FitError");
  } catch (const FitError& e) {
    CHECK(e.iterations() == 1);
    CHECK(std::isfinite(e.last_iterate()[DipFit::kCenter]));
  }

  auto bad = noiseless(0.4, 0.2, 50030.0, 10.0);
  bad[3].std_error = 0.0;
  CHECK_THROWS_AS(fit_inverted_gaussian(bad), std::invalid_argument);
}

TEST_CASE("fit errors scale with the weights") {
  const auto pts = noisy_scan(50030.513, 25000, 21);
  auto scaled = pts;
  for (auto& p : scaled) p.std_error *= std::sqrt(2.0);
  const auto a = fit_inverted_gaussian(pts);
  const auto b = fit_inverted_gaussian(scaled);
  CHECK(b.center == doctest::Approx(a.center).epsilon(1e-9));
  CHECK(b.center_stderr == doctest::Approx(a.center_stderr * std::sqrt(2.0)).epsilon(1e-6));
  CHECK(b.chi_square == doctest::Approx(a.chi_square / 2.0).epsilon(1e-6));
}

TEST_CASE("fit center error matches the scatter of repeated scans") {
  const int seeds = 120;
  std::vector<double> centers;
  double reported = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const auto fit = fit_inverted_gaussian(noisy_scan(50030.513, 25000, 1000 + s));
    centers.push_back(fit.center);
    reported += fit.center_stderr / seeds;
  }
  double mean = 0.0;
  for (double c : centers) mean += c / seeds;
  double var = 0.0;
  for (double c : centers) var += (c - mean) * (c - mean) / (seeds - 1);
  const double scatter = std::sqrt(var);
  CAPTURE(scatter);
  CAPTURE(reported);
  CHECK(std::abs(reported / scatter - 1.0) < 0.3);
  CHECK(std::abs(mean - 50030.513) < 4 * scatter / std::sqrt(seeds));
}

TEST_CASE("low mean photon number dip still fits") {
  // mu = 0.01: depth ~ 2.5e-5 on a 1e-4 baseline; noise is large but the
  // smoothed start keeps the fit on the dip.
  Engine rng = make_engine(5);
  std::vector<ScanPoint> pts;
  for (double d : grid(50030.0, 50.0, 0.18)) {
    const double p = coincidence_probability(0.01, temporal_overlap(d - 50030.5, 0.05));
    std::binomial_distribution<std::int64_t> draw(2'500'000, p);
    pts.push_back(make_scan_point(d, draw(rng), 2'500'000));
  }
  const auto fit = fit_inverted_gaussian(pts);
  CHECK(std::abs(fit.center - 50030.5) < 4 * fit.center_stderr);
  CHECK(fit.center_stderr > 0.1);
}

TEST_CASE("offset arithmetic") {
  const auto est = estimate_offset(MeasuredDelay{49969.588, 0.037}, MeasuredDelay{50030.513, 0.038},
                                   2, -2, 100.0);
  CHECK(est.delta_hat == doctest::Approx(230.4625).epsilon(1e-12));
  CHECK(est.delta_stderr == doctest::Approx(0.0265).epsilon(0.005));
  CHECK(est.delta_stderr == doctest::Approx(std::hypot(0.037, 0.038) / 2).epsilon(1e-12));

  const auto zero = estimate_offset(MeasuredDelay{}, MeasuredDelay{}, 0, 0, 100.0);
  CHECK(zero.delta_hat == 0.0);
  CHECK(zero.delta_stderr == 0.0);

  // Linear in every input.
  const auto shifted = estimate_offset(MeasuredDelay{49969.588, 0.037},
                                       MeasuredDelay{50030.513 + 1.0, 0.038}, 3, -2, 100.0);
  CHECK(shifted.delta_hat - est.delta_hat == doctest::Approx(50.5));
}

TEST_CASE("asymmetry bias") {
  CHECK(asymmetry_bias(5e4, 5e4) == 0.0);
  CHECK(asymmetry_bias(50002.0, 50000.0) == doctest::Approx(1.0));
  CHECK(asymmetry_bias(50000.0, 50002.0) == doctest::Approx(-1.0));
}

TEST_CASE("correlation argmin rules") {
  std::vector<CorrelationPoint> scan{
      {-1, 0.30, 0.01, 100, 30}, {0, 0.25, 0.01, 100, 25}, {1, 0.25, 0.01, 100, 25},
      {2, 0.10, 0.01, 0, 0},     {-2, 0.25, 0.01, 100, 25}};
  CHECK(correlation_argmin(scan) == 0);
  scan[1].rate = 0.26;
  CHECK(correlation_argmin(scan) == 1);  // tie with -2 goes to the smaller |k|
  scan[4].rate = 0.2;
  CHECK(correlation_argmin(scan) == -2);
  for (auto& p : scan) p.n_trials = 0;
  CHECK(!correlation_argmin(scan).has_value());
}

#include "homsync/config.hpp"
#include "homsync/pipeline.hpp"

TEST_CASE("correlation scan finds the pairing offset") {
  ExperimentConfig cfg;
  cfg.source.n_pulses = 20000;
  validate(cfg);
  const auto ab =
      simulate_frame(cfg, Direction::AtoB, balanced_local_delay(cfg, Direction::AtoB), 41);
  const auto scan_ab = correlation_scan(ab, KRange{-10, 10});
  CHECK(scan_ab.size() == 21);
  CHECK(correlation_argmin(scan_ab) == 2);
  CHECK(dominant_index_offset(ab) == 2);
  for (const auto& p : scan_ab) {
    CAPTURE(p.k);
    if (p.k == 2)
      CHECK(std::abs(p.rate - postselected_min(1.0)) < 4 * p.std_error);
    else
      CHECK(std::abs(p.rate - expected_floor(1.0)) < 4 * p.std_error);
  }

  const auto ba =
      simulate_frame(cfg, Direction::BtoA, balanced_local_delay(cfg, Direction::BtoA), 42);
  CHECK(correlation_argmin(correlation_scan(ba, KRange{-10, 10})) == -2);

  cfg.clocks.delta_true = 0.0;
  const auto aligned =
      simulate_frame(cfg, Direction::AtoB, balanced_local_delay(cfg, Direction::AtoB), 43);
  CHECK(correlation_argmin(correlation_scan(aligned, KRange{-5, 5})) == 0);

  FrameRecord empty;
  CHECK(!dominant_index_offset(empty).has_value());
  const auto none = correlation_scan(empty, KRange{-2, 2});
  CHECK(none.size() == 5);
  CHECK(!correlation_argmin(none).has_value());
}
