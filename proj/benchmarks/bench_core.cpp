#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "homsync/bessel.hpp"
#include "homsync/config.hpp"
#include "homsync/fit.hpp"
#include "homsync/interference.hpp"
#include "homsync/pipeline.hpp"
#include "homsync/rng.hpp"
#include "homsync/simulator.hpp"

using namespace homsync;

static void BM_BesselI0(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bessel_i0(x));
    x = x > 40.0 ? 0.0 : x + 0.37;
  }
}
BENCHMARK(BM_BesselI0);

static void BM_CoincidenceModel(benchmark::State& state) {
  const CoincidenceModel model(1.0);
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model(0.01 * i));
    i = i == 100 ? 0 : i + 1;
  }
}
BENCHMARK(BM_CoincidenceModel);

static void BM_SimulateFrame(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.source.n_pulses = state.range(0);
  validate(cfg);
  const double vdl = balanced_local_delay(cfg, Direction::AtoB);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_postselected_counts(cfg, Direction::AtoB, vdl, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateFrame)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

static void BM_FitDip(benchmark::State& state) {
  Engine rng = make_engine(3);
  std::vector<ScanPoint> pts;
  for (int i = -277; i <= 277; ++i) {
    const double d = 50030.0 + 0.18 * i;
    const double p = coincidence_probability(1.0, temporal_overlap(d - 50030.5, 0.05));
    std::binomial_distribution<std::int64_t> draw(25000, p);
    pts.push_back(make_scan_point(d, draw(rng), 25000));
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_inverted_gaussian(pts));
}
BENCHMARK(BM_FitDip)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
