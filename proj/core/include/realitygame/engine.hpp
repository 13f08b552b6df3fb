#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "realitygame/population.hpp"
#include "realitygame/reality_map.hpp"
#include "realitygame/rng.hpp"

namespace rg {

// Optional extra participant whose bet is re-optimized before every toss
// (against the current crowd, accounting for her own market impact).
struct LiveOptimizerConfig {
  double initial_wealth = 0.0;  // share of total wealth, in [0, 1)
};

struct RunConfig {
  PlayerPopulation population;
  RealityMap map = RealityMap::identity();
  std::size_t horizon = 2000;
  std::uint64_t seed = 0;
  std::uint64_t run_index = 0;  // ensemble member number; part of the RNG key
  std::size_t snapshot_stride = 100;
  bool record_wealth = true;
  // Per-toss log return of an infinitesimal bettor playing the objective
  // probability: KL(q_t || p_t), the distance the crowd leaves on the table.
  bool record_log_return = true;
  std::optional<LiveOptimizerConfig> live_optimizer;
};

struct WealthSnapshot {
  std::size_t t = 0;  // tosses settled when the snapshot was taken
  std::vector<double> wealths;
};

struct StepRecord {
  double p = 0.0;
  double q = 0.0;
  Outcome outcome = Outcome::tails;
};

struct Trajectory {
  // Step t (1-based) lives at index t-1. p is read before the toss.
  std::vector<double> p;
  std::vector<double> q;
  std::vector<Outcome> outcomes;
  std::vector<double> log_return;         // empty unless recorded
  std::vector<double> optimizer_wealth;   // live optimizer only
  std::vector<double> optimizer_strategy; // live optimizer only
  std::vector<WealthSnapshot> snapshots;  // t = 0, every stride, and the end
  PlayerPopulation final_population;
  std::size_t steps = 0;
  bool aborted = false;
  std::string abort_reason;
};

// One toss: read p, draw the outcome (heads iff u < q), settle the book.
// Consumes exactly one uniform. ZeroPool propagates as an exception here.
StepRecord step(PlayerPopulation& pop, const RealityMap& map, CounterRng& rng);

// Same with the outcome dictated (tests, counterfactuals); draws nothing.
StepRecord step_forced(PlayerPopulation& pop, const RealityMap& map, Outcome outcome);

// Full run; a pure function of the config. A ZeroPool degeneracy ends the run
// early with the partial trajectory kept and `aborted` set.
Trajectory run(const RunConfig& config);

struct ExcludedRun {
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  std::string reason;
};

struct EnsembleStats {
  std::size_t horizon = 0;
  std::vector<std::uint64_t> seeds;
  std::size_t completed_runs = 0;
  // Per-step moments across completed runs (population variance).
  std::vector<double> mean_p, var_p;
  std::vector<double> mean_q, var_q;
  std::vector<double> mean_r, var_r;  // empty when log returns are not recorded
  std::vector<ExcludedRun> excluded;
};

// Member i runs with seed seeds[i] and run_index i; moments are merged in
// member order whatever the scheduling, so the result does not depend on the
// worker count. Aborted members are excluded from the moments and reported.
// workers = 0 picks the hardware concurrency.
EnsembleStats ensemble(const RunConfig& config, const std::vector<std::uint64_t>& seeds,
                       unsigned workers = 0);

// The seed list an experiment derives from its master seed: master + i.
std::vector<std::uint64_t> derive_seeds(std::uint64_t master_seed, std::size_t count);

namespace detail {
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);
}

// Run one member per seed, reduce each trajectory to R immediately (keeps
// memory flat), return the results in member order. Deterministic like
// ensemble().
template <typename R>
std::vector<R> map_runs(const RunConfig& config, const std::vector<std::uint64_t>& seeds,
                        unsigned workers,
                        const std::function<R(std::size_t, const Trajectory&)>& reduce) {
  std::vector<R> out(seeds.size());
  detail::parallel_for(seeds.size(), workers, [&](std::size_t i) {
    RunConfig member = config;
    member.seed = seeds[i];
    member.run_index = i;
    out[i] = reduce(i, run(member));
  });
  return out;
}

}  // namespace rg
