// End-to-end acceptance suite. Each criterion prints one [PASS]/[FAIL] line
// with its measured values; supporting detail is indented above it. Run all
// criteria with no arguments or a single one by number: `acceptance 3`.
// Exit code = number of failed criteria. Every tolerance is pinned here.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "realitygame/analytics.hpp"
#include "realitygame/engine.hpp"
#include "realitygame/experiment.hpp"
#include "realitygame/rational.hpp"
#include "realitygame/reality_map.hpp"
#include "realitygame/rng.hpp"

using namespace rg;
namespace fs = std::filesystem;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

double g_criterion_start = 0.0;  // reset by main before each criterion

void detail(const char* fmt, ...) {
  std::printf("         ");
  va_list args;
  va_start(args, fmt);
  std::vprintf(fmt, args);
  va_end(args);
  std::printf("\n");
  std::fflush(stdout);
}

bool verdict(int criterion, bool pass, const std::string& summary) {
  std::printf("[%s] criterion %d: %s  (%.1fs)\n", pass ? "PASS" : "FAIL", criterion,
              summary.c_str(), now_s() - g_criterion_start);
  std::fflush(stdout);
  return pass;
}

// ---------------------------------------------------------------------------
// 1. Inefficiency exponents across the six reference maps.
//    N = 3000, T = 1e4, 1024-run ensembles, per-regime log-log fit windows.

bool criterion_1() {
  // The inefficiency decay at N=3000 is not a perfectly clean power law: the
  // mean log return peaks by t~5, then decays with slow log-log curvature, so
  // the fitted exponent depends mildly on the window. Maps whose fixed point
  // is interior are fitted early ([30, 800]), before finite-population
  // saturation steepens the decay; maps that lock onto a boundary fixed point
  // are fitted later ([100, 1500]), where the lock-in asymptotics hold.
  // Windows, ensemble size, and seeds were calibrated on independent seed
  // blocks so each map's estimate sits >= 4.5 sigma inside its bounds (the
  // estimator's true seed-to-seed sigma at this ensemble size is ~0.006-0.02
  // per map — about 10x the in-fit OLS stderr, because a run's log-return
  // trajectory is autocorrelated in t). Don't shrink the ensemble or move a
  // window without recalibrating that margin.
  struct Row {
    RealityMap map;
    double lo, hi;
    std::size_t fit_lo, fit_hi;
  };
  const Row rows[] = {
      {RealityMap::constant(0.5), 0.90, 1.10, 30, 800},
      {RealityMap::self_defeating(), 0.90, 1.15, 30, 800},
      {RealityMap::arctan_family(0.5), 0.40, 0.60, 30, 800},
      {RealityMap::arctan_family(1.5), 0.12, 0.32, 100, 1500},
      {RealityMap::arctan_family(2.0), 0.05, 0.60, 100, 1500},
      {RealityMap::arctan_family(0.75), 0.05, 0.60, 30, 800},
  };
  constexpr std::size_t kPlayers = 3000;
  constexpr std::size_t kHorizon = 10000;
  constexpr std::size_t kEnsemble = 1024;

  bool pass = true;
  std::string worst;
  for (std::size_t i = 0; i < std::size(rows); ++i) {
    RunConfig cfg;
    cfg.population = PlayerPopulation::uniform_grid(kPlayers);
    cfg.map = rows[i].map;
    cfg.horizon = kHorizon;
    cfg.record_wealth = false;
    cfg.record_log_return = true;
    const std::vector<std::uint64_t> seeds = derive_seeds(500000 + i * kEnsemble, kEnsemble);
    const EnsembleStats stats = ensemble(cfg, seeds, 0);
    const PowerLawFit fit = fit_power_law(stats.mean_r, rows[i].fit_lo, rows[i].fit_hi);
    const bool ok = fit.exponent >= rows[i].lo && fit.exponent <= rows[i].hi;
    detail("%-16s gamma_hat = %.4f +- %.4f (bounds [%.2f, %.2f], window [%zu, %zu], R^2 %.3f, "
           "%zu/%zu runs)%s",
           rows[i].map.label().c_str(), fit.exponent, fit.stderr_exponent, rows[i].lo, rows[i].hi,
           rows[i].fit_lo, rows[i].fit_hi, fit.r_squared, stats.completed_runs, kEnsemble,
           ok ? "" : "  <-- out of bounds");
    if (!ok) {
      pass = false;
      worst = rows[i].map.label();
    }
  }
  std::string summary = pass ? "fitted decay exponents inside bounds for all six maps"
                             : "exponent out of bounds for " + worst;
  return verdict(1, pass, summary);
}

// ---------------------------------------------------------------------------
// 2. Fixed-point convergence of the aggregate bias, 100 seeds per map.

std::vector<double> terminal_q(const RealityMap& map, std::size_t players, std::size_t horizon,
                               std::uint64_t seed_base, std::size_t count) {
  RunConfig cfg;
  cfg.population = PlayerPopulation::uniform_grid(players);
  cfg.map = map;
  cfg.horizon = horizon;
  cfg.record_wealth = false;
  cfg.record_log_return = false;
  const std::vector<std::uint64_t> seeds = derive_seeds(seed_base, count);
  return map_runs<double>(cfg, seeds, 0, [&](std::size_t, const Trajectory& traj) {
    return map.evaluate(total_bet(traj.final_population));
  });
}

bool criterion_2() {
  constexpr std::size_t kSeeds = 100;
  constexpr std::size_t kRequired = 95;

  std::size_t mid = 0;
  for (double q : terminal_q(RealityMap::self_defeating(), 29, 2000, 240000, kSeeds))
    if (std::abs(q - 0.5) < 0.05) ++mid;
  detail("self-defeating, T=2000: |q_T - 1/2| < 0.05 in %zu/%zu seeds", mid, kSeeds);

  std::size_t locked = 0;
  for (double q : terminal_q(RealityMap::arctan_family(1.5), 29, 100000, 241000, kSeeds))
    if (std::min(q, 1.0 - q) < 0.1) ++locked;
  std::size_t locked_short = 0;
  for (double q : terminal_q(RealityMap::arctan_family(1.5), 29, 2000, 241000, kSeeds))
    if (std::min(q, 1.0 - q) < 0.1) ++locked_short;
  detail("arctan(1.5), T=1e5: q_T within 0.1 of {0,1} in %zu/%zu seeds "
         "(T=2000 reference: %zu/%zu; lock-in is still in progress there)",
         locked, kSeeds, locked_short, kSeeds);

  std::size_t on_grid = 0;
  double worst_dist = 0.0;
  for (double q : terminal_q(RealityMap::identity(), 29, 100000, 242000, kSeeds)) {
    double dist = 1.0;
    for (int k = 1; k <= 29; ++k) dist = std::min(dist, std::abs(q - k / 30.0));
    worst_dist = std::max(worst_dist, dist);
    if (dist < 0.05) ++on_grid;
  }
  detail("identity, T=1e5: q_T within 0.05 of a strategy grid point in %zu/%zu seeds "
         "(max distance %.2e)",
         on_grid, kSeeds, worst_dist);

  const bool pass = mid >= kRequired && locked >= kRequired && on_grid >= kRequired;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "convergence in %zu/%zu (self-defeating), %zu/%zu (arctan 1.5), %zu/%zu "
                "(identity); >= %zu required",
                mid, kSeeds, locked, kSeeds, on_grid, kSeeds, kRequired);
  return verdict(2, pass, buf);
}

// ---------------------------------------------------------------------------
// 3. Closed-form mixture distribution vs direct simulation, identity map.

bool criterion_3() {
  constexpr std::size_t kPlayers = 29;
  constexpr std::size_t kTosses = 1000;
  constexpr std::size_t kRuns = 1000000;
  constexpr std::size_t kSubsample = 10000;
  constexpr double kTvBound = 0.02;
  constexpr double kWealthTol = 1e-10;

  const PlayerPopulation start = PlayerPopulation::uniform_grid(kPlayers);
  const SubjectiveDistribution closed = subjective_heads_distribution(start, kTosses);

  RunConfig cfg;
  cfg.population = start;
  cfg.map = RealityMap::identity();
  cfg.horizon = kTosses;
  cfg.record_wealth = false;
  cfg.record_log_return = false;
  const std::vector<std::uint64_t> seeds = derive_seeds(300000, kRuns);
  const std::vector<std::uint32_t> heads =
      map_runs<std::uint32_t>(cfg, seeds, 0, [](std::size_t, const Trajectory& traj) {
        std::uint32_t m = 0;
        for (Outcome o : traj.outcomes) m += (o == Outcome::heads) ? 1u : 0u;
        return m;
      });

  const auto tv_of = [&](std::size_t count) {
    std::vector<double> hist(kTosses + 1, 0.0);
    for (std::size_t i = 0; i < count; ++i) hist[heads[i]] += 1.0;
    double tv = 0.0;
    for (std::size_t m = 0; m <= kTosses; ++m)
      tv += std::abs(hist[m] / static_cast<double>(count) - closed.probability[m]);
    return 0.5 * tv;
  };
  const double tv_full = tv_of(kRuns);
  const double tv_small = tv_of(kSubsample);
  detail("heads-count histogram vs mixture: TV = %.4f over %zu runs (bound %.2f); "
         "first %zu runs alone give TV = %.4f, the sampling floor at ~900 occupied bins",
         tv_full, kRuns, kTvBound, kSubsample, tv_small);

  double worst = 0.0;
  for (std::uint64_t seed : {std::uint64_t{101}, std::uint64_t{202}, std::uint64_t{303},
                             std::uint64_t{404}, std::uint64_t{505}}) {
    RunConfig one = cfg;
    one.seed = seed;
    const Trajectory traj = run(one);
    std::size_t m = 0;
    for (Outcome o : traj.outcomes) m += (o == Outcome::heads) ? 1 : 0;
    const std::vector<double> predicted = subjective_wealth_given_heads(start, m, kTosses);
    for (std::size_t i = 0; i < predicted.size(); ++i)
      worst = std::max(worst, std::abs(predicted[i] - traj.final_population.wealths[i]));
  }
  detail("terminal wealth vs closed form, 5 seeds: max |diff| = %.2e (tol %.0e)", worst,
         kWealthTol);

  const bool pass = tv_full < kTvBound && worst <= kWealthTol;
  char buf[120];
  std::snprintf(buf, sizeof buf, "TV %.4f < %.2f and per-run wealths match to %.2e", tv_full,
                kTvBound, worst);
  return verdict(3, pass, buf);
}

// ---------------------------------------------------------------------------
// 4. Every strategy dominates equally often under the identity map.

bool criterion_4() {
  constexpr std::size_t kPlayers = 29;
  constexpr std::size_t kRuns = 2900;
  constexpr std::size_t kHorizon = 100000;
  constexpr double kChi2Critical = 48.2782;  // 1% upper tail, 28 degrees of freedom

  RunConfig cfg;
  cfg.population = PlayerPopulation::uniform_grid(kPlayers);
  cfg.map = RealityMap::identity();
  cfg.horizon = kHorizon;
  cfg.record_wealth = false;
  cfg.record_log_return = false;
  const std::vector<std::uint64_t> seeds = derive_seeds(260000, kRuns);
  const std::vector<std::uint32_t> winners =
      map_runs<std::uint32_t>(cfg, seeds, 0, [](std::size_t, const Trajectory& traj) {
        const auto& w = traj.final_population.wealths;
        return static_cast<std::uint32_t>(
            std::max_element(w.begin(), w.end()) - w.begin());
      });

  std::vector<std::size_t> counts(kPlayers, 0);
  for (std::uint32_t w : winners) ++counts[w];
  const double expected = static_cast<double>(kRuns) / kPlayers;
  double chi2 = 0.0;
  std::size_t lo = kRuns, hi = 0;
  for (std::size_t c : counts) {
    chi2 += (c - expected) * (c - expected) / expected;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  detail("winner counts over %zu runs: min %zu / max %zu per strategy (expected %.0f)", kRuns, lo,
         hi, expected);
  const bool pass = chi2 < kChi2Critical;
  char buf[120];
  std::snprintf(buf, sizeof buf, "uniform domination chi^2 = %.2f < %.2f (df 28, 1%% level)",
                chi2, kChi2Critical);
  return verdict(4, pass, buf);
}

// ---------------------------------------------------------------------------
// 5. The big bettor's optimum bifurcates at wealth share w = 1/3.

RationalContext half_crowd(double wealth) {
  RationalContext ctx;
  ctx.opponents = PlayerPopulation::with_equal_wealth({0.5});
  ctx.wealth = wealth;
  ctx.map = RealityMap::arctan_family(2.0);
  return ctx;
}

bool criterion_5() {
  const OptimalStrategy small = optimal_strategy(half_crowd(0.2));
  const bool small_ok =
      small.maximizers.size() == 1 && std::abs(small.maximizers[0] - 0.5) <= 1e-6;
  detail("w = 0.2: %zu optimum(s), first at s* = %.8f (want a single one at the center)",
         small.maximizers.size(), small.maximizers.empty() ? 0.0 : small.maximizers[0]);

  const OptimalStrategy big = optimal_strategy(half_crowd(0.6));
  const bool big_ok = big.maximizers.size() == 2 &&
                      std::abs(big.maximizers[0] + big.maximizers[1] - 1.0) <= 1e-6 &&
                      big.value > 0.0;
  if (big.maximizers.size() == 2)
    detail("w = 0.6: optima {%.6f, %.6f}, symmetric, r* = %.6f > 0", big.maximizers[0],
           big.maximizers[1], big.value);

  // Bisect the behavioral flip: smallest w whose optimum leaves the center.
  const auto off_center = [](double w) {
    const OptimalStrategy best = optimal_strategy(half_crowd(w));
    double dev = 0.0;
    for (double s : best.maximizers) dev = std::max(dev, std::abs(s - 0.5));
    return dev > 1e-3;
  };
  double lo = 0.25, hi = 0.45;
  for (int iter = 0; iter < 40; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (off_center(mid) ? hi : lo) = mid;
  }
  const double flip = 0.5 * (lo + hi);
  const bool flip_ok = std::abs(flip - 1.0 / 3.0) <= 0.01;
  detail("behavioral flip at w = %.5f (theory 1/3 = %.5f, tol 0.01)", flip, 1.0 / 3.0);

  const bool pass = small_ok && big_ok && flip_ok;
  char buf[140];
  std::snprintf(buf, sizeof buf,
                "center hold at w=0.2, symmetric split with r* = %.4f at w=0.6, flip at w = %.4f",
                big.value, flip);
  return verdict(5, pass, buf);
}

// ---------------------------------------------------------------------------
// 6. Property checks: conservation, KL sign, gradient, drift law, shuffle.

bool criterion_6() {
  bool pass = true;

  // Wealth conservation through 1e6 settled tosses.
  {
    PlayerPopulation pop = PlayerPopulation::uniform_grid(50);
    const RealityMap map = RealityMap::self_defeating();
    CounterRng rng(777, 0);
    double worst = 0.0;
    for (std::size_t t = 0; t < 1000000; ++t) {
      step(pop, map, rng);
      double sum = 0.0;
      for (double w : pop.wealths) sum += w;
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    const bool ok = worst <= 1e-12;
    detail("conservation: max |total wealth - 1| = %.2e over 1e6 steps (tol 1e-12)", worst);
    pass = pass && ok;
  }

  // KL non-negativity of every recorded log return.
  {
    const RealityMap maps[] = {
        RealityMap::constant(0.5),      RealityMap::self_defeating(),
        RealityMap::arctan_family(0.5), RealityMap::arctan_family(1.5),
        RealityMap::arctan_family(2.0), RealityMap::identity(),
        RealityMap::multimodal(),
    };
    double min_r = 0.0;
    std::size_t checked = 0;
    for (std::size_t i = 0; i < std::size(maps); ++i) {
      RunConfig cfg;
      cfg.population = PlayerPopulation::uniform_grid(29);
      cfg.map = maps[i];
      cfg.horizon = 2000;
      cfg.record_log_return = true;
      cfg.record_wealth = false;
      for (std::uint64_t seed : derive_seeds(280000 + i * 10, 3)) {
        cfg.seed = seed;
        const Trajectory traj = run(cfg);
        for (double r : traj.log_return) min_r = std::min(min_r, r);
        checked += traj.log_return.size();
      }
    }
    const bool ok = min_r >= 0.0;
    detail("log-return sign: min r_t = %.1e over %zu recorded steps (must be >= 0)", min_r,
           checked);
    pass = pass && ok;
  }

  // Analytic log-return derivative vs central finite differences.
  {
    const RealityMap maps[] = {
        RealityMap::arctan_family(2.0), RealityMap::arctan_family(0.75),
        RealityMap::identity(),         RealityMap::constant(0.7),
        RealityMap::self_defeating(),
    };
    double worst = 0.0;
    const double h = 1e-7;
    for (const RealityMap& map : maps)
      for (double w : {0.0, 0.3, 0.7})
        for (double s : {0.15, 0.3, 0.45, 0.6, 0.85}) {
          RationalContext ctx;
          ctx.opponents = PlayerPopulation::uniform_grid(5);
          ctx.wealth = w;
          ctx.map = map;
          const double fd =
              (expected_log_return(ctx, s + h) - expected_log_return(ctx, s - h)) / (2.0 * h);
          const double an = log_return_derivative(ctx, s);
          worst = std::max(worst, std::abs(an - fd) / std::max(1.0, std::abs(fd)));
        }
    const bool ok = worst <= 1e-5;
    detail("gradient: max relative |analytic - FD| = %.2e over 75 cases (tol 1e-5)", worst);
    pass = pass && ok;
  }

  // Early-epoch drift law: regress dp on (q - p)/t, slope should be 1.
  {
    constexpr std::size_t kRuns = 1024;
    RunConfig cfg;
    cfg.population = PlayerPopulation::uniform_grid(200);
    cfg.map = RealityMap::constant(0.7);
    cfg.horizon = 401;
    cfg.record_wealth = false;
    cfg.record_log_return = false;
    struct XY {
      double sxx = 0.0, sxy = 0.0;
    };
    const std::vector<std::uint64_t> seeds = derive_seeds(270000, kRuns);
    const std::vector<XY> parts =
        map_runs<XY>(cfg, seeds, 0, [](std::size_t, const Trajectory& traj) {
          XY acc;
          for (std::size_t i = 79; i + 1 <= 400; ++i) {
            const double x = (traj.q[i] - traj.p[i]) / static_cast<double>(i + 1);
            const double y = traj.p[i + 1] - traj.p[i];
            acc.sxx += x * x;
            acc.sxy += x * y;
          }
          return acc;
        });
    double sxx = 0.0, sxy = 0.0;
    for (const XY& part : parts) {
      sxx += part.sxx;
      sxy += part.sxy;
    }
    const double slope = sxy / sxx;
    const bool ok = slope >= 0.9 && slope <= 1.1;
    detail("drift law: through-origin slope = %.4f over %zu runs, t in [80,400] (bounds "
           "[0.9, 1.1])",
           slope, kRuns);
    pass = pass && ok;
  }

  // Player order cannot matter to the closed-form conditional wealth.
  {
    PlayerPopulation pop = PlayerPopulation::uniform_grid(29);
    double total = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      pop.wealths[i] = static_cast<double>(i + 1);
      total += pop.wealths[i];
    }
    for (double& w : pop.wealths) w /= total;

    std::vector<std::size_t> perm(pop.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), std::mt19937(99));
    PlayerPopulation shuffled;
    shuffled.strategies.resize(pop.size());
    shuffled.wealths.resize(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
      shuffled.strategies[i] = pop.strategies[perm[i]];
      shuffled.wealths[i] = pop.wealths[perm[i]];
    }
    const std::vector<double> direct = subjective_wealth_given_heads(pop, 617, 1000);
    const std::vector<double> mixed = subjective_wealth_given_heads(shuffled, 617, 1000);
    double worst = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i)
      worst = std::max(worst, std::abs(mixed[i] - direct[perm[i]]));
    const bool ok = worst <= 1e-10;
    detail("shuffle invariance: max |closed-form diff| under a player permutation = %.2e "
           "(tol 1e-10)",
           worst);
    pass = pass && ok;
  }

  return verdict(6, pass,
                 pass ? "conservation, KL sign, gradient, drift slope and shuffle all hold"
                      : "at least one property violated (see details)");
}

// ---------------------------------------------------------------------------
// 7. Byte-identical outputs across worker counts.

bool criterion_7() {
  const std::string spec_text =
      "kind = inefficiency\n"
      "map = arctan\n"
      "alpha = 1.5\n"
      "n_players = 100\n"
      "horizon = 500\n"
      "ensemble = 8\n"
      "seed = 4242\n"
      "fit_lo = 20\n"
      "fit_hi = 200\n";
  const ExperimentSpec spec = parse_spec(spec_text, "<acceptance>");
  const fs::path base = fs::temp_directory_path() / "realitygame_acceptance_determinism";
  const fs::path dir1 = base / "w1";
  const fs::path dir8 = base / "w8";
  fs::remove_all(base);
  run_experiment(spec, dir1.string(), 1);
  run_experiment(spec, dir8.string(), 8);

  const auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  bool pass = true;
  for (const char* name : {"inefficiency.csv", "fits.csv", "inefficiency.svg"}) {
    const std::string a = slurp(dir1 / name);
    const std::string b = slurp(dir8 / name);
    const bool same = !a.empty() && a == b;
    detail("%s: %zu bytes with 1 worker, %s with 8", name, a.size(),
           same ? "identical" : "DIFFERENT");
    pass = pass && same;
  }
  fs::remove_all(base);
  return verdict(7, pass,
                 pass ? "1-worker and 8-worker runs produce byte-identical outputs"
                      : "outputs differ across worker counts");
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 7) {
      std::fprintf(stderr, "usage: %s [1..7]\n", argv[0]);
      return 2;
    }
  }
  bool (*const criteria[])() = {criterion_1, criterion_2, criterion_3, criterion_4,
                                criterion_5, criterion_6, criterion_7};
  int failures = 0;
  for (int k = 1; k <= 7; ++k) {
    if (only != 0 && k != only) continue;
    g_criterion_start = now_s();
    if (!criteria[k - 1]()) ++failures;
  }
  return failures;
}
