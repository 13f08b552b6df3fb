#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "realitygame/analytics.hpp"
#include "realitygame/engine.hpp"
#include "realitygame/experiment.hpp"
#include "realitygame/format.hpp"
#include "realitygame/rational.hpp"
#include "realitygame/reality_map.hpp"

namespace fs = std::filesystem;

namespace {

using namespace rg;

struct Tally {
  int failures = 0;

  void check(bool ok, const std::string& what) {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << what << "\n";
    if (!ok) {
      ++failures;
    }
  }
};

RunConfig small_config(const RealityMap& map, std::size_t n, std::size_t horizon,
                       bool record_r) {
  RunConfig cfg;
  cfg.population = PlayerPopulation::uniform_grid(n);
  cfg.map = map;
  cfg.horizon = horizon;
  cfg.record_wealth = false;
  cfg.record_log_return = record_r;
  return cfg;
}

double terminal_q(const RealityMap& map, const Trajectory& traj) {
  return map.evaluate(total_bet(traj.final_population));
}

// Reduced-scale exponent fits: N=500, T=2000, 64 runs, window [100, 1000].
// Bounds are widened relative to the full-scale run to absorb the extra
// finite-size drift at this scale.
void check_exponents(Tally& t, unsigned workers) {
  struct Case {
    RealityMap map;
    double lo, hi;
  };
  const Case cases[] = {
      {RealityMap::constant(0.5), 0.85, 1.25},
      {RealityMap::self_defeating(), 0.85, 1.25},
      {RealityMap::arctan_family(0.5), 0.40, 0.72},
      {RealityMap::arctan_family(1.5), 0.06, 0.34},
      {RealityMap::arctan_family(0.75), 0.05, 0.35},
      {RealityMap::arctan_family(2.0), 0.28, 0.62},
  };
  for (std::size_t i = 0; i < std::size(cases); ++i) {
    RunConfig cfg = small_config(cases[i].map, 500, 2000, true);
    const EnsembleStats stats =
        ensemble(cfg, derive_seeds(9000 + 100000 * i, 64), workers);
    const PowerLawFit fit = fit_power_law(stats.mean_r, 100, 1000);
    std::ostringstream line;
    line << "exponent " << cases[i].map.label() << ": gamma_hat " << format_fixed(fit.exponent, 4)
         << " in [" << cases[i].lo << ", " << cases[i].hi << "] (N=500, T=2000, 64 runs)";
    t.check(fit.exponent >= cases[i].lo && fit.exponent <= cases[i].hi, line.str());
  }
}

void check_convergence(Tally& t, unsigned workers) {
  // Self-defeating: q pulled to 1/2 fast.
  {
    RunConfig cfg = small_config(RealityMap::self_defeating(), 29, 2000, false);
    const auto near_half = map_runs<int>(
        cfg, derive_seeds(40, 30), workers, [&cfg](std::size_t, const Trajectory& traj) {
          return std::abs(terminal_q(cfg.map, traj) - 0.5) < 0.05 ? 1 : 0;
        });
    const int hits = std::accumulate(near_half.begin(), near_half.end(), 0);
    t.check(hits >= 27, "self-defeating: terminal q within 0.05 of 1/2 in " +
                            std::to_string(hits) + "/30 runs (T=2000)");
  }
  // Strongly self-reinforcing: locks onto a boundary given enough time.
  {
    RunConfig cfg = small_config(RealityMap::arctan_family(1.5), 29, 20000, false);
    const auto locked = map_runs<int>(
        cfg, derive_seeds(41, 30), workers, [&cfg](std::size_t, const Trajectory& traj) {
          const double q = terminal_q(cfg.map, traj);
          return std::min(q, 1.0 - q) < 0.1 ? 1 : 0;
        });
    const int hits = std::accumulate(locked.begin(), locked.end(), 0);
    t.check(hits >= 27, "arctan(1.5): terminal q within 0.1 of {0,1} in " +
                            std::to_string(hits) + "/30 runs (T=20000)");
  }
  // Purely subjective: q ends on (near) one player's strategy.
  {
    RunConfig cfg = small_config(RealityMap::identity(), 29, 20000, false);
    const auto on_grid = map_runs<int>(
        cfg, derive_seeds(42, 20), workers, [&cfg](std::size_t, const Trajectory& traj) {
          const double q = terminal_q(cfg.map, traj);
          double best = 1.0;
          for (std::size_t k = 1; k <= 29; ++k) {
            best = std::min(best, std::abs(q - static_cast<double>(k) / 30.0));
          }
          return best < 0.05 ? 1 : 0;
        });
    const int hits = std::accumulate(on_grid.begin(), on_grid.end(), 0);
    t.check(hits >= 18, "identity: terminal q within 0.05 of a grid strategy in " +
                            std::to_string(hits) + "/20 runs (T=20000)");
  }
}

void check_closed_form(Tally& t, unsigned workers) {
  const std::size_t kT = 300;
  const std::size_t kRuns = 30000;
  const PlayerPopulation pop = PlayerPopulation::uniform_grid(29);
  RunConfig cfg = small_config(RealityMap::identity(), 29, kT, false);

  const auto heads = map_runs<int>(
      cfg, derive_seeds(50, kRuns), workers, [](std::size_t, const Trajectory& traj) {
        return static_cast<int>(
            std::count(traj.outcomes.begin(), traj.outcomes.end(), Outcome::heads));
      });
  std::vector<double> hist(kT + 1, 0.0);
  for (int m : heads) {
    hist[static_cast<std::size_t>(m)] += 1.0 / static_cast<double>(kRuns);
  }
  const SubjectiveDistribution dist = subjective_heads_distribution(pop, kT);
  double tv = 0.0;
  for (std::size_t m = 0; m <= kT; ++m) {
    tv += std::abs(hist[m] - dist.probability[m]);
  }
  tv *= 0.5;
  t.check(tv < 0.055, "heads-count histogram vs closed form: TV " + format_fixed(tv, 4) +
                          " < 0.055 (t=300, 30000 runs)");

  // Terminal wealths must match the conditional closed form given the count.
  double worst = 0.0;
  for (std::uint64_t seed : {101, 202, 303}) {
    RunConfig one = cfg;
    one.seed = seed;
    const Trajectory traj = run(one);
    const std::size_t m = static_cast<std::size_t>(
        std::count(traj.outcomes.begin(), traj.outcomes.end(), Outcome::heads));
    const std::vector<double> predicted = subjective_wealth_given_heads(pop, m, kT);
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      worst = std::max(worst, std::abs(predicted[i] - traj.final_population.wealths[i]));
    }
  }
  t.check(worst < 1e-10, "terminal wealths vs conditional closed form: max diff " +
                             format_double(worst) + " < 1e-10");
}

void check_domination(Tally& t, unsigned workers) {
  RunConfig cfg = small_config(RealityMap::identity(), 29, 20000, false);
  const auto winner = map_runs<int>(
      cfg, derive_seeds(60, 290), workers, [](std::size_t, const Trajectory& traj) {
        const std::vector<double>& w = traj.final_population.wealths;
        return static_cast<int>(std::max_element(w.begin(), w.end()) - w.begin());
      });
  std::vector<double> counts(29, 0.0);
  for (int w : winner) {
    counts[static_cast<std::size_t>(w)] += 1.0;
  }
  double chi2 = 0.0;
  for (double c : counts) {
    chi2 += (c - 10.0) * (c - 10.0) / 10.0;
  }
  t.check(chi2 < 48.2782, "identity domination uniform across players: chi2 " +
                              format_fixed(chi2, 2) + " < 48.28 (290 runs, T=20000)");
}

void check_rational(Tally& t) {
  RationalContext ctx;
  ctx.opponents = PlayerPopulation::with_equal_wealth({0.5});
  ctx.map = RealityMap::arctan_family(2.0);

  ctx.wealth = 0.2;
  const OptimalStrategy low = optimal_strategy(ctx);
  t.check(low.maximizers.size() == 1 && std::abs(low.maximizers.front() - 0.5) < 1e-6,
          "w=0.2: best bet stays at the fixed point 1/2");

  ctx.wealth = 0.6;
  const OptimalStrategy high = optimal_strategy(ctx);
  const bool symmetric =
      high.maximizers.size() == 2 &&
      std::abs(high.maximizers.front() + high.maximizers.back() - 1.0) < 1e-6 &&
      high.value > 0.0;
  t.check(symmetric, "w=0.6: symmetric off-center maxima with positive log return");

  double lo = 0.30, hi = 0.36;
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    ctx.wealth = mid;
    const OptimalStrategy best = optimal_strategy(ctx);
    bool off_center = false;
    for (double s : best.maximizers) {
      off_center = off_center || std::abs(s - 0.5) > 1e-3;
    }
    (off_center ? hi : lo) = mid;
  }
  const double flip = 0.5 * (lo + hi);
  t.check(std::abs(flip - 1.0 / 3.0) <= 0.01,
          "destabilizing wealth threshold by bisection: " + format_fixed(flip, 5) +
              " within 0.01 of 1/3");
}

void check_drift(Tally& t, unsigned workers) {
  RunConfig cfg = small_config(RealityMap::constant(0.7), 200, 400, false);
  struct XY {
    double sxx = 0.0, sxy = 0.0;
  };
  const auto parts = map_runs<XY>(
      cfg, derive_seeds(70, 256), workers, [](std::size_t, const Trajectory& traj) {
        XY acc;
        for (std::size_t i = 79; i + 1 < traj.p.size(); ++i) {
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
  t.check(slope > 0.85 && slope < 1.15,
          "drift law, constant(0.7): regression slope " + format_fixed(slope, 4) +
              " in [0.85, 1.15] (256 runs, t in [80,400])");
}

void check_conservation(Tally& t) {
  PlayerPopulation pop = PlayerPopulation::uniform_grid(50);
  const RealityMap map = RealityMap::self_defeating();
  CounterRng rng(7, 0);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    step(pop, map, rng);
    double sum = 0.0;
    for (double w : pop.wealths) {
      sum += w;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  t.check(worst <= 1e-12, "wealth conservation over 100000 steps: worst |sum-1| = " +
                              format_double(worst));
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void check_determinism(Tally& t, const std::string& scratch_dir) {
  const ExperimentSpec spec = parse_spec(
      "kind = inefficiency\nmap = self-defeating\nn_players = 100\nhorizon = 500\n"
      "ensemble = 8\nseed = 5\nfit_lo = 20\nfit_hi = 200\n");
  const fs::path a = fs::path(scratch_dir) / "det_w1";
  const fs::path b = fs::path(scratch_dir) / "det_w4";
  run_experiment(spec, a.string(), 1);
  run_experiment(spec, b.string(), 4);
  bool same = true;
  for (const char* name : {"inefficiency.csv", "fits.csv", "inefficiency.svg"}) {
    same = same && read_file(a / name) == read_file(b / name);
  }
  t.check(same, "inefficiency experiment byte-identical across 1 and 4 workers");
}

}  // namespace

int run_verify(unsigned workers, const std::string& scratch_dir) {
  std::cout << "reduced-scale verification sweep (see the acceptance suite for full scale)\n";
  Tally t;
  check_conservation(t);
  check_exponents(t, workers);
  check_convergence(t, workers);
  check_closed_form(t, workers);
  check_domination(t, workers);
  check_rational(t);
  check_drift(t, workers);
  check_determinism(t, scratch_dir);
  std::cout << (t.failures == 0 ? "verify: all checks passed\n"
                                : "verify: " + std::to_string(t.failures) + " check(s) failed\n");
  return t.failures;
}
