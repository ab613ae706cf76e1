#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "tightlab/estimator.hpp"
#include "tightlab/io/config.hpp"
#include "tightlab/io/pipeline.hpp"
#include "tightlab/market_sim.hpp"
#include "tightlab/zones.hpp"

using namespace tightlab;

namespace {

void BM_SimulateEconomy(benchmark::State& state) {
  sim::EconomyConfig cfg;
  cfg.n_firms = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sim::simulate_economy(cfg));
}
BENCHMARK(BM_SimulateEconomy)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_FirmDesignAndTsls(benchmark::State& state) {
  const io::PipelineConfig cfg;
  auto panel = sim::simulate_economy(cfg.simulation);
  io::FirmInputs in;
  in.panel = panel.firms;
  in.cells = panel.markets;
  in.notification_shares = panel.notification_shares;
  const auto spec = io::main_spec(cfg.estimation);
  for (auto _ : state) {
    const auto d = io::build_firm_design(in, cfg.tightness, cfg.estimation);
    benchmark::DoNotOptimize(est::tsls(spec, d.data));
  }
}
BENCHMARK(BM_FirmDesignAndTsls)->Unit(benchmark::kMillisecond);

void BM_TslsTwoWayFe(benchmark::State& state) {
  const auto panel = testing::make_iv_panel(static_cast<std::size_t>(state.range(0)), 8, 1);
  est::RegressionSpec s;
  s.dependent = "y";
  s.endogenous = {"x1", "x2"};
  s.exogenous = {"c"};
  s.instruments = {"z1", "z2"};
  s.fixed_effects = {"unit", "period"};
  s.cluster = "cluster";
  for (auto _ : state) benchmark::DoNotOptimize(est::tsls(s, panel.data));
}
BENCHMARK(BM_TslsTwoWayFe)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ZoneSweep(benchmark::State& state) {
  const auto planted = testing::planted_two_communities(static_cast<int>(state.range(0)), 3);
  const auto g = zones::CommutingGraph::from_directed(planted.directed, planted.labor_force);
  const auto grid = zones::threshold_grid(0.01, 0.50, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(zones::sweep_thresholds(g, grid));
}
BENCHMARK(BM_ZoneSweep)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
