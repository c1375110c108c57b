// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "homsync/commands.hpp"
#include "homsync/config.hpp"
#include "homsync/interference.hpp"
#include "homsync/offset.hpp"
#include "homsync/pipeline.hpp"
#include "homsync/rng.hpp"
#include "homsync/security.hpp"
#include "oracles.hpp"

using namespace homsync;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_stddev(const std::vector<double>& v) {
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

ExperimentConfig reference(std::int64_t n_pulses, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.source.n_pulses = n_pulses;
  cfg.seed = seed;
  validate(cfg);
  return cfg;
}

Outcome analytic_core() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int points = 0;
  for (double mu_a : {0.1, 0.5, 1.0, 2.0})
    for (double mu_b : {0.1, 0.5, 1.0, 2.0})
      for (double t : {0.3, 0.5, 0.7})
        for (double s : {0.0, 0.25, 0.7071, 1.0}) {
          const double ref = oracle::phase_average(mu_a, mu_b, t, s);
          const double got = coincidence_probability(SourcePair{mu_a, mu_b, t, 1.0 - t}, s);
          worst = std::max(worst, std::abs(got - ref) / ref);
          ++points;
        }
  const double elapsed = seconds_since(t0);
  return {worst < 1e-8 && elapsed < 1.0,
          fmt("%d grid points, max relative error %.2e, %.3f s", points, worst, elapsed)};
}

Outcome closed_forms() {
  // `frozen` comes from a 30-digit evaluation of the closed forms; `quoted`
  // is the 7-digit value in the requirements, reported for comparison only.
  struct Row {
    const char* name;
    double value, frozen, quoted, oracle;
  };
  const Row rows[] = {
      {"postselected_min", postselected_min(1.0), 0.20381606804933182, 0.2038189,
       oracle::postselected_min(1.0)},
      {"expected_floor", expected_floor(1.0), 0.30319424302209472, 0.3031937,
       oracle::expected_floor(1.0)},
      {"visibility", visibility(1.0), 0.48991965593198520, 0.489919, oracle::visibility(1.0)},
      {"ir_postselected_floor", ir_postselected_floor(1.0), 0.25425415981099567, 0.2542318,
       oracle::ir_postselected_floor(1.0)},
  };
  bool pass = true;
  std::string detail;
  for (const auto& r : rows) {
    const double vs_oracle = std::abs(r.value - r.oracle);
    pass = pass && vs_oracle < 1e-9 && std::abs(r.value - r.frozen) < 1e-12;
    detail += fmt("%s=%.9f (oracle diff %.1e, quoted %.7g) ", r.name, r.value, vs_oracle, r.quoted);
  }
  return {pass, detail};
}

Outcome offset_arithmetic() {
  const auto est = estimate_offset(MeasuredDelay{49969.588, 0.037}, MeasuredDelay{50030.513, 0.038},
                                   2, -2, 100.0);
  const bool pass =
      std::abs(est.delta_hat - 230.4625) < 1e-9 && std::abs(est.delta_stderr - 0.0265) < 5e-5;
  return {pass, fmt("delta_hat=%.6f ns, sigma=%.5f ns", est.delta_hat, est.delta_stderr)};
}

struct EnsembleRun {
  double error = 0.0;  // delta_hat - delta_true
  double stderr_reported = 0.0;
  int k = 0;
  int k_prime = 0;
  double seconds = 0.0;
};

std::vector<EnsembleRun> ensemble(const std::function<ExperimentConfig(std::uint64_t)>& make,
                                  int seeds) {
  std::vector<EnsembleRun> runs;
  for (int s = 1; s <= seeds; ++s) {
    const auto cfg = make(static_cast<std::uint64_t>(s));
    const auto t0 = Clock::now();
    const auto r = run_sync(cfg);
    runs.push_back({r.estimate.delta_hat - cfg.clocks.delta_true, r.estimate.delta_stderr,
                    r.estimate.k, r.estimate.k_prime, seconds_since(t0)});
  }
  return runs;
}

Outcome statistical_reproduction(const std::vector<EnsembleRun>& runs) {
  std::vector<double> err, abs_err;
  double slowest = 0.0, reported = 0.0;
  for (const auto& r : runs) {
    err.push_back(r.error);
    abs_err.push_back(std::abs(r.error));
    slowest = std::max(slowest, r.seconds);
    reported += r.stderr_reported / static_cast<double>(runs.size());
  }
  const double sigma = sample_stddev(err);
  const double mean_abs = mean(abs_err);
  const double sigma_ps = 1e3 * sigma;
  const bool pass = mean_abs < 3 * sigma && sigma_ps >= 42.5 && sigma_ps <= 127.5 && slowest < 120.0;
  return {pass, fmt("mean |err| %.1f ps, ensemble sigma %.1f ps (band 42.5-127.5), mean reported "
                    "sigma %.1f ps, mean err %+.1f ps, slowest run %.1f s",
                    1e3 * mean_abs, sigma_ps, 1e3 * reported, 1e3 * mean(err), slowest)};
}

Outcome correlation_stage(const std::vector<EnsembleRun>& runs) {
  int good = 0;
  for (const auto& r : runs) good += r.k == 2 && r.k_prime == -2;
  return {good >= 19, fmt("k=2 and k'=-2 in %d/%zu seeds", good, runs.size())};
}

Outcome width_scaling() {
  // A 400 ns period keeps neighbouring pulses outside the +/-5 sigma_t scan
  // of the widest setting.
  std::vector<double> widths;
  std::string detail;
  for (double sigma_t : {5.0, 10.0, 20.0}) {
    ExperimentConfig cfg;
    cfg.source.n_pulses = 20000;
    cfg.source.rep_period = 400.0;
    cfg.source.temporal_width = sigma_t;
    cfg.seed = 6;
    validate(cfg);
    const auto dip = run_dip_scan(cfg, Direction::AtoB);
    widths.push_back(dip.fit.width);
    detail += fmt("sigma_t=%g: w=%.3f ns ", sigma_t, dip.fit.width);
  }
  const double r2 = widths[1] / widths[0], r4 = widths[2] / widths[0];
  detail += fmt("ratios 1:%.3f:%.3f", r2, r4);
  return {std::abs(r2 / 2 - 1) < 0.1 && std::abs(r4 / 4 - 1) < 0.1, detail};
}

Outcome security_separation() {
  const int seeds = 100;
  const std::int64_t trials = 20000;
  const double significance = 0.00135;
  int ir_flagged = 0, honest_flagged = 0;
  for (int s = 0; s < seeds; ++s) {
    const auto seed = static_cast<std::uint64_t>(s);
    Engine honest_rng = make_engine(derive_seed(seed, StreamPurpose::SecurityFrame,
                                                Direction::AtoB, 0, 0));
    Engine ir_rng = make_engine(derive_seed(seed, StreamPurpose::SecurityFrame,
                                            Direction::AtoB, 1, 0));
    const auto honest = sample_postselected(1.0, 1.0, AttackKind::None, trials, honest_rng);
    const auto ir = sample_postselected(1.0, 1.0, AttackKind::InterceptResend, trials, ir_rng);
    honest_flagged += detect_eavesdropper(honest.rate(), honest.trials, 1.0, significance).flagged;
    ir_flagged += detect_eavesdropper(ir.rate(), ir.trials, 1.0, significance).flagged;
  }
  return {ir_flagged >= 99 && honest_flagged <= 1,
          fmt("IR flagged %d/100, honest flagged %d/100", ir_flagged, honest_flagged)};
}

Outcome asymmetry(const std::vector<EnsembleRun>& runs) {
  std::vector<double> err;
  for (const auto& r : runs) err.push_back(r.error);
  const double sigma = sample_stddev(err);
  const double bias = mean(err);
  const double sem = sigma / std::sqrt(static_cast<double>(err.size()));
  return {std::abs(bias - 1.0) < 3 * sigma,
          fmt("mean bias %+.4f ns (expected +1), sigma_delta %.4f ns, standard error of mean "
              "%.4f ns",
              bias, sigma, sem)};
}

std::vector<std::pair<std::string, std::string>> read_tree(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    files.emplace_back(fs::relative(e.path(), dir).string(),
                       std::string(std::istreambuf_iterator<char>(in), {}));
  }
  std::sort(files.begin(), files.end());
  return files;
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "homsync_acceptance_determinism";
  fs::remove_all(root);
  auto cfg = reference(10000, 42);
  std::ostringstream log;
  cfg.threads = 1;
  const int rc_a = cmd_sync(cfg, {root / "a", false}, log);
  cfg.threads = 4;
  const int rc_b = cmd_sync(cfg, {root / "b", false}, log);
  const auto a = read_tree(root / "a");
  const auto b = read_tree(root / "b");
  const bool pass = rc_a == 0 && rc_b == 0 && !a.empty() && a == b;
  return {pass, fmt("%zu files, exit codes %d/%d, %s (1 vs 4 threads)", a.size(), rc_a, rc_b,
                    a == b ? "byte-identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](int id, const Outcome& o) {
    std::printf("criterion %d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };

  report(1, analytic_core());
  report(2, closed_forms());
  report(3, offset_arithmetic());

  const auto desk = ensemble([](std::uint64_t s) { return reference(10000, s); }, 20);
  report(4, statistical_reproduction(desk));
  report(5, correlation_stage(desk));

  report(6, width_scaling());
  report(7, security_separation());

  const auto skewed = ensemble(
      [](std::uint64_t s) {
        auto cfg = reference(10000, 100 + s);
        cfg.channel.reciprocal = false;
        cfg.channel.prop_delay_ab = 50002.0;
        cfg.channel.prop_delay_ba = 50000.0;
        validate(cfg);
        return cfg;
      },
      20);
  report(8, asymmetry(skewed));
  report(9, determinism());

  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
