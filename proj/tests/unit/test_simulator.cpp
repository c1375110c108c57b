#include <doctest.h>

#include <cmath>
#include <sstream>

#include "homsync/config.hpp"
#include "homsync/errors.hpp"
#include "homsync/event_log.hpp"
#include "homsync/interference.hpp"
#include "homsync/pipeline.hpp"
#include "homsync/rng.hpp"
#include "homsync/simulator.hpp"

using namespace homsync;

namespace {

ExperimentConfig defaults() {
  ExperimentConfig cfg;
  validate(cfg);
  return cfg;
}

bool within_3_sigma(std::int64_t hits, std::int64_t trials, double p) {
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(trials));
  return std::abs(static_cast<double>(hits) / trials - p) < 3 * sigma;
}

}  // namespace

TEST_CASE("effective mean photon number") {
  CHECK(effective_mu(1.86, 2.0, 0.85) == doctest::Approx(0.9975).epsilon(1e-4));
  CHECK(effective_mu(0.7, 0.0, 1.0) == 0.7);
  CHECK(effective_mu(0.0, 3.0, 0.5) == 0.0);
  CHECK(effective_mu(defaults()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(effective_mu(-1.0, 2.0, 0.85), std::domain_error);
  CHECK_THROWS_AS(effective_mu(1.0, -2.0, 0.85), std::domain_error);
  CHECK_THROWS_AS(effective_mu(1.0, 2.0, 1.2), std::domain_error);
}

TEST_CASE("detector jitter statistics") {
  Engine rng = make_engine(11);
  CHECK(sample_jitter(0.0, rng) == 0.0);
  const int n = 1000000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_jitter(150.0, rng);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  CHECK(sd == doctest::Approx(150.0 / 2.35482).epsilon(0.01));
  CHECK(std::abs(mean) < 4 * 63.7 / 1000.0);
}

TEST_CASE("frames are deterministic in the seed") {
  auto cfg = defaults();
  cfg.source.n_pulses = 2000;
  const double vdl = balanced_local_delay(cfg, Direction::AtoB);
  const auto a = simulate_frame(cfg, Direction::AtoB, vdl, 99);
  const auto b = simulate_frame(cfg, Direction::AtoB, vdl, 99);
  const auto c = simulate_frame(cfg, Direction::AtoB, vdl, 100);
  REQUIRE(a.pairs.size() == b.pairs.size());
  bool same = true;
  for (std::size_t i = 0; i < a.pairs.size(); ++i)
    same = same && a.pairs[i].coincided == b.pairs[i].coincided &&
           a.pairs[i].tau_effective == b.pairs[i].tau_effective &&
           a.pairs[i].local_state == b.pairs[i].local_state;
  CHECK(same);
  bool differs = false;
  for (std::size_t i = 0; i < std::min(a.pairs.size(), c.pairs.size()); ++i)
    differs = differs || a.pairs[i].local_state != c.pairs[i].local_state;
  CHECK(differs);

  const auto counts = simulate_postselected_counts(cfg, Direction::AtoB, vdl, 99);
  const auto direct = postselected_counts(a);
  CHECK(counts.trials == direct.trials);
  CHECK(counts.coincidences == direct.coincidences);
}

TEST_CASE("balanced frame reproduces the post-selected minimum") {
  const auto cfg = defaults();
  const auto frame =
      simulate_frame(cfg, Direction::AtoB, balanced_local_delay(cfg, Direction::AtoB), 1234);
  CHECK(frame.n_trials == static_cast<std::int64_t>(frame.pairs.size()));
  CHECK(frame.n_trials >= cfg.source.n_pulses - 3);
  const auto ps = postselected_counts(frame);
  CHECK(ps.trials > 20000);
  CHECK(within_3_sigma(ps.coincidences, ps.trials, postselected_min(1.0)));
  // Without post-selection the rate sits at the averaged floor.
  CHECK(within_3_sigma(frame.coincidences(), frame.n_trials, expected_floor(1.0)));
}

TEST_CASE("detuned frame sits at the distinguishable level") {
  auto cfg = defaults();
  cfg.source.rep_period = 1000.0;
  const auto frame = simulate_frame(
      cfg, Direction::AtoB, balanced_local_delay(cfg, Direction::AtoB) + 200.0, 77);
  const auto ps = postselected_counts(frame);
  CHECK(within_3_sigma(ps.coincidences, ps.trials, 0.3995764));
}

TEST_CASE("both directions balance at their own delay") {
  const auto cfg = defaults();
  const auto frame =
      simulate_frame(cfg, Direction::BtoA, balanced_local_delay(cfg, Direction::BtoA), 8);
  const auto ps = postselected_counts(frame);
  CHECK(within_3_sigma(ps.coincidences, ps.trials, postselected_min(1.0)));
  CHECK(balanced_local_delay(cfg, Direction::AtoB) == doctest::Approx(50030.456));
  CHECK(balanced_local_delay(cfg, Direction::BtoA) == doctest::Approx(49969.544));
}

TEST_CASE("empty and invalid frames") {
  auto cfg = defaults();
  cfg.source.n_pulses = 0;
  const auto frame = simulate_frame(cfg, Direction::AtoB, 50030.0, 1);
  CHECK(frame.pairs.empty());
  CHECK(frame.n_trials == 0);

  auto dark = defaults();
  dark.source.mu_source = 0.0;
  CHECK_THROWS_AS(simulate_frame(dark, Direction::AtoB, 50030.0, 1), ConfigError);
}

TEST_CASE("event log round trip") {
  auto cfg = defaults();
  cfg.source.n_pulses = 500;
  const auto frame = simulate_frame(cfg, Direction::BtoA, 49969.544, 5);
  std::stringstream io;
  write_event_log(io, frame);
  const auto back = read_event_log(io);
  CHECK(back.direction == frame.direction);
  CHECK(back.vdl_setting == frame.vdl_setting);
  CHECK(back.n_trials == frame.n_trials);
  REQUIRE(back.pairs.size() == frame.pairs.size());
  for (std::size_t i = 0; i < frame.pairs.size(); ++i) {
    CHECK(back.pairs[i].tau_effective == frame.pairs[i].tau_effective);
    CHECK(back.pairs[i].remote_index == frame.pairs[i].remote_index);
    CHECK(back.pairs[i].channel_state == frame.pairs[i].channel_state);
    CHECK(back.pairs[i].coincided == frame.pairs[i].coincided);
  }
  std::stringstream bad("not a log\n");
  CHECK_THROWS_AS(read_event_log(bad), Error);
}

TEST_CASE("seed derivation separates streams") {
  const auto a = derive_seed(1, StreamPurpose::Frame, Direction::AtoB, 0, 0);
  CHECK(a == derive_seed(1, StreamPurpose::Frame, Direction::AtoB, 0, 0));
  CHECK(a != derive_seed(2, StreamPurpose::Frame, Direction::AtoB, 0, 0));
  CHECK(a != derive_seed(1, StreamPurpose::SecurityFrame, Direction::AtoB, 0, 0));
  CHECK(a != derive_seed(1, StreamPurpose::Frame, Direction::BtoA, 0, 0));
  CHECK(a != derive_seed(1, StreamPurpose::Frame, Direction::AtoB, 1, 0));
  CHECK(a != derive_seed(1, StreamPurpose::Frame, Direction::AtoB, 0, 1));
}
