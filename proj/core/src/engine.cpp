#include "realitygame/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "realitygame/kl.hpp"
#include "realitygame/rational.hpp"

namespace rg {

StepRecord step(PlayerPopulation& pop, const RealityMap& map, CounterRng& rng) {
  const double p = total_bet(pop);
  const double q = map.evaluate(p);
  const Outcome o = rng.next_uniform() < q ? Outcome::heads : Outcome::tails;
  apply_outcome_in_place(pop, o);
  return {p, q, o};
}

StepRecord step_forced(PlayerPopulation& pop, const RealityMap& map, Outcome outcome) {
  const double p = total_bet(pop);
  const double q = map.evaluate(p);
  apply_outcome_in_place(pop, outcome);
  return {p, q, outcome};
}

Trajectory run(const RunConfig& config) {
  config.population.validate();
  if (config.horizon == 0) throw DomainError("horizon must be at least 1");
  if (config.snapshot_stride == 0) throw DomainError("snapshot stride must be at least 1");

  PlayerPopulation pop = config.population;
  const bool live = config.live_optimizer.has_value();
  if (live) {
    const double w0 = config.live_optimizer->initial_wealth;
    if (!(w0 >= 0.0 && w0 < 1.0)) throw DomainError("live optimizer wealth must lie in [0,1)");
    // She joins the book as one more player; her strategy slot is rewritten
    // before every toss.
    for (double& w : pop.wealths) w *= 1.0 - w0;
    pop.strategies.push_back(0.5);
    pop.wealths.push_back(w0);
  }

  const std::size_t T = config.horizon;
  Trajectory traj;
  traj.p.reserve(T);
  traj.q.reserve(T);
  traj.outcomes.reserve(T);
  if (config.record_log_return) traj.log_return.reserve(T);

  auto snapshot = [&](std::size_t t) {
    if (config.record_wealth) traj.snapshots.push_back({t, pop.wealths});
  };
  snapshot(0);

  CounterRng rng(config.seed, config.run_index);
  RationalContext ctx;
  if (live) ctx.map = config.map;

  for (std::size_t t = 1; t <= T; ++t) {
    if (live) {
      const double w_r = pop.wealths.back();
      const std::size_t n = pop.size() - 1;
      const double crowd_total = 1.0 - w_r;
      if (crowd_total > 0.0) {
        ctx.wealth = w_r;
        ctx.opponents.strategies.assign(pop.strategies.begin(), pop.strategies.begin() + n);
        ctx.opponents.wealths.resize(n);
        for (std::size_t i = 0; i < n; ++i)
          ctx.opponents.wealths[i] = pop.wealths[i] / crowd_total;
        pop.strategies.back() = optimal_strategy(ctx).maximizers.front();
      }
      // else she owns the whole pool: every bet just returns her own money,
      // so the previous strategy stands.
    }
    StepRecord rec;
    try {
      rec = step(pop, config.map, rng);
    } catch (const ZeroPoolError& e) {
      traj.aborted = true;
      traj.abort_reason = e.what();
      break;
    }
    traj.p.push_back(rec.p);
    traj.q.push_back(rec.q);
    traj.outcomes.push_back(rec.outcome);
    if (config.record_log_return) traj.log_return.push_back(kl_bernoulli(rec.q, rec.p));
    if (live) {
      traj.optimizer_wealth.push_back(pop.wealths.back());
      traj.optimizer_strategy.push_back(pop.strategies.back());
    }
    traj.steps = t;
    if (t % config.snapshot_stride == 0 || t == T) snapshot(t);
  }
  if (traj.aborted &&
      (traj.snapshots.empty() || traj.snapshots.back().t != traj.steps))
    snapshot(traj.steps);

  traj.final_population = std::move(pop);
  return traj;
}

namespace detail {

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

std::vector<std::uint64_t> derive_seeds(std::uint64_t master_seed, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = master_seed + i;
  return seeds;
}

namespace {

struct Moments {
  std::vector<double> mean, m2;
  void init(std::size_t n) {
    mean.assign(n, 0.0);
    m2.assign(n, 0.0);
  }
  void update(const std::vector<double>& x, double k) {  // k = 1-based run count
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double delta = x[j] - mean[j];
      mean[j] += delta / k;
      m2[j] += delta * (x[j] - mean[j]);
    }
  }
  std::vector<double> variance(double k) const {
    std::vector<double> v(m2.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = k > 0 ? m2[j] / k : 0.0;
    return v;
  }
};

}  // namespace

EnsembleStats ensemble(const RunConfig& config, const std::vector<std::uint64_t>& seeds,
                       unsigned workers) {
  if (seeds.empty()) throw DomainError("ensemble needs at least one seed");
  {
    std::vector<std::uint64_t> sorted = seeds;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw DomainError("ensemble seeds must be distinct");
  }

  const std::size_t T = config.horizon;
  EnsembleStats stats;
  stats.horizon = T;
  stats.seeds = seeds;
  const bool want_r = config.record_log_return;

  Moments mp, mq, mr;
  mp.init(T);
  mq.init(T);
  if (want_r) mr.init(T);

  // Members are launched in bounded chunks and merged strictly in member
  // order, so the moment recursion sees the same sequence whatever the
  // worker count (and memory stays flat for big ensembles).
  const std::size_t chunk = 32;
  std::vector<Trajectory> slot(std::min(chunk, seeds.size()));
  double completed = 0.0;
  for (std::size_t start = 0; start < seeds.size(); start += chunk) {
    const std::size_t n = std::min(chunk, seeds.size() - start);
    detail::parallel_for(n, workers, [&](std::size_t k) {
      RunConfig member = config;
      member.seed = seeds[start + k];
      member.run_index = start + k;
      slot[k] = run(member);
    });
    for (std::size_t k = 0; k < n; ++k) {
      Trajectory& tr = slot[k];
      if (tr.aborted) {
        stats.excluded.push_back({start + k, seeds[start + k], tr.steps, tr.abort_reason});
      } else {
        completed += 1.0;
        mp.update(tr.p, completed);
        mq.update(tr.q, completed);
        if (want_r) mr.update(tr.log_return, completed);
      }
      tr = Trajectory{};
    }
  }
  if (completed == 0.0)
    throw ZeroPoolError("every ensemble member hit an empty pool; no statistics to report");

  stats.completed_runs = static_cast<std::size_t>(completed);
  stats.mean_p = std::move(mp.mean);
  stats.var_p = mp.variance(completed);
  stats.mean_q = std::move(mq.mean);
  stats.var_q = mq.variance(completed);
  if (want_r) {
    stats.mean_r = std::move(mr.mean);
    stats.var_r = mr.variance(completed);
  }
  return stats;
}

}  // namespace rg
