#pragma once

#include <cstddef>
#include <vector>

#include "realitygame/population.hpp"
#include "realitygame/reality_map.hpp"

namespace rg {

// One bettor choosing s against a fixed crowd. The opponents' wealths are
// normalized among themselves; the bettor owns `wealth` (w) of the total, so
// her bet moves the aggregate: p(s) = (1 - w) total_bet(opponents) + w s.
// w = 0 is the measure-zero observer who cannot move the odds.
struct RationalContext {
  PlayerPopulation opponents;
  double wealth = 0.0;  // in [0, 1)
  RealityMap map = RealityMap::identity();

  double aggregate_bet(double s) const;
};

// Expected log growth of one toss at bet s under the objective probability
// q = map(p(s)):  r(s) = q log(s/p) + (1-q) log((1-s)/(1-p)).
// DomainError when s (or the induced p) is not strictly inside (0,1).
double expected_log_return(const RationalContext& ctx, double s);

// dr/ds with the market-impact chain rule (dp/ds = w):
//   q'(p) w [log s - log p - log(1-s) + log(1-p)]
//   + q (1/s - w/p) + (1-q) (w/(1-p) - 1/(1-s)).
// Needs the map slope, so it inherits NotDifferentiableError at jumps.
double log_return_derivative(const RationalContext& ctx, double s);

struct OptimalStrategy {
  // Ascending; more than one entry when maxima tie within 1e-12 in value
  // (the curve is exactly symmetric in the balanced cases).
  std::vector<double> maximizers;
  double value = 0.0;  // r at the maximizers; >= 0, since s = p always earns 0
};

// Scan `grid_size` interior points, then sharpen each candidate bracket by
// bisecting the derivative to |r'| < 1e-10 (golden-section on r when the
// derivative is unavailable). s = p is always a candidate, which pins the
// value at >= 0.
OptimalStrategy optimal_strategy(const RationalContext& ctx, std::size_t grid_size = 10000);

struct LogReturnCurve {
  std::vector<double> s;
  std::vector<double> r;
  OptimalStrategy best;
};

LogReturnCurve sample_log_return_curve(const RationalContext& ctx, std::size_t grid_size = 512);

// Whether everyone (the crowd and a bettor holding w) sitting at a fixed
// point p~ of the map resists small unilateral deviations. The curvature of r
// at s = p~ is ((1-w)/(s(1-s))) (2 w q'(p~) - (1 + w)), so the equilibrium is
// stable iff 2 w q'(p~) - (1 + w) < 0.
bool equilibrium_stability(const RealityMap& map, double w, double p_fixed);

}  // namespace rg
