// Long-horizon invariant: whatever the reality map, the pari-mutuel dynamics
// concentrate wealth. By t = 1e5 a single player holds essentially the whole
// pool in nearly every seed. One line per map; exit code counts failures.
#include <algorithm>
#include <cstdio>
#include <vector>

#include "realitygame/engine.hpp"
#include "realitygame/reality_map.hpp"

using namespace rg;

namespace {

constexpr std::size_t kSeedsPerMap = 40;
constexpr std::size_t kRequired = 38;  // >= 95%
constexpr std::size_t kHorizon = 100000;
constexpr double kThreshold = 0.99;

bool concentrates(const RealityMap& map, std::uint64_t seed_base) {
  RunConfig cfg;
  cfg.population = PlayerPopulation::uniform_grid(29);
  cfg.map = map;
  cfg.horizon = kHorizon;
  cfg.record_wealth = false;
  cfg.record_log_return = false;

  const std::vector<std::uint64_t> seeds = derive_seeds(seed_base, kSeedsPerMap);
  const std::vector<char> hits = map_runs<char>(
      cfg, seeds, 0, [](std::size_t, const Trajectory& traj) -> char {
        const auto& w = traj.final_population.wealths;
        return *std::max_element(w.begin(), w.end()) > kThreshold ? 1 : 0;
      });
  std::size_t count = 0;
  for (char h : hits) count += static_cast<std::size_t>(h);

  const bool ok = count >= kRequired;
  std::printf("[%s] %-18s max wealth > %.2f at t=%zu in %zu/%zu seeds\n", ok ? "ok" : "FAIL",
              map.label().c_str(), kThreshold, kHorizon, count, kSeedsPerMap);
  return ok;
}

}  // namespace

int main() {
  const RealityMap maps[] = {
      RealityMap::constant(0.5),
      RealityMap::self_defeating(),
      RealityMap::arctan_family(0.5),
      RealityMap::arctan_family(1.5),
      RealityMap::identity(),
      RealityMap::multimodal(),
      RealityMap::piecewise_linear({0.0, 0.25, 0.5, 1.0}, {0.0, 0.1, 0.5, 1.0}),
  };
  int failures = 0;
  std::uint64_t base = 5000;
  for (const RealityMap& map : maps) {
    if (!concentrates(map, base)) ++failures;
    base += 1000;
  }
  return failures;
}
