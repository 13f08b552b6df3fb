#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "realitygame/analytics.hpp"
#include "realitygame/engine.hpp"
#include "realitygame/rational.hpp"
#include "realitygame/rng.hpp"

using namespace rg;

namespace {

// One settled toss. Alternating outcomes keeps the book funded forever, so
// the loop can run in place without resets distorting the numbers.
void BM_settle_toss(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  PlayerPopulation pop = PlayerPopulation::uniform_grid(n);
  bool heads = false;
  for (auto _ : state) {
    apply_outcome_in_place(pop, heads ? Outcome::heads : Outcome::tails);
    heads = !heads;
    benchmark::DoNotOptimize(pop.wealths.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_settle_toss)->Arg(29)->Arg(500)->Arg(3000);

void BM_full_run(benchmark::State& state) {
  RunConfig cfg;
  cfg.population = PlayerPopulation::uniform_grid(static_cast<std::size_t>(state.range(0)));
  cfg.map = RealityMap::self_defeating();
  cfg.horizon = 1000;
  cfg.seed = 12;
  cfg.record_wealth = false;
  cfg.record_log_return = true;
  for (auto _ : state) {
    const Trajectory traj = run(cfg);
    benchmark::DoNotOptimize(traj.p.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.horizon) *
                          state.range(0));
}
BENCHMARK(BM_full_run)->Arg(29)->Arg(500);

void BM_uniform_stream(benchmark::State& state) {
  CounterRng rng(99, 0);
  double acc = 0.0;
  for (auto _ : state) {
    acc += rng.next_uniform();
  }
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_uniform_stream);

void BM_subjective_distribution(benchmark::State& state) {
  const PlayerPopulation pop = PlayerPopulation::uniform_grid(29);
  const std::size_t t = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const SubjectiveDistribution dist = subjective_heads_distribution(pop, t);
    benchmark::DoNotOptimize(dist.probability.data());
  }
}
BENCHMARK(BM_subjective_distribution)->Arg(1000)->Arg(10000);

void BM_power_law_fit(benchmark::State& state) {
  std::vector<double> series(10000);
  for (std::size_t t = 1; t <= series.size(); ++t)
    series[t - 1] = 3.0 / static_cast<double>(t);
  for (auto _ : state) {
    const PowerLawFit fit = fit_power_law(series, 100, 2000);
    benchmark::DoNotOptimize(fit.exponent);
  }
}
BENCHMARK(BM_power_law_fit);

void BM_optimal_strategy(benchmark::State& state) {
  RationalContext ctx;
  ctx.opponents = PlayerPopulation::with_equal_wealth({0.5});
  ctx.wealth = 0.45;
  ctx.map = RealityMap::arctan_family(2.0);
  for (auto _ : state) {
    const OptimalStrategy best = optimal_strategy(ctx);
    benchmark::DoNotOptimize(best.value);
  }
}
BENCHMARK(BM_optimal_strategy);

}  // namespace

BENCHMARK_MAIN();
