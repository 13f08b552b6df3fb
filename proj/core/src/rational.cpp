#include "realitygame/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace rg {
namespace {

// r(s) and r'(s) with the crowd's aggregate bet precomputed, so a 1e4-point
// scan doesn't redo the O(N) wealth sum.
struct Curve {
  double w;
  double crowd;  // total_bet(opponents)
  const RealityMap* map;

  double p(double s) const { return (1.0 - w) * crowd + w * s; }

  double r(double s) const {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("bet s must lie strictly inside (0,1)");
    const double pp = p(s);
    if (!(pp > 0.0 && pp < 1.0))
      throw DomainError("aggregate bet pinned at 0 or 1: log return undefined");
    const double q = map->evaluate(pp);
    // q log(s/p) + (1-q) log((1-s)/(1-p)); the 0 log terms vanish cleanly
    // because the logs stay finite for interior s, p.
    return q * std::log(s / pp) + (1.0 - q) * std::log((1.0 - s) / (1.0 - pp));
  }

  double drds(double s) const {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("bet s must lie strictly inside (0,1)");
    const double pp = p(s);
    if (!(pp > 0.0 && pp < 1.0))
      throw DomainError("aggregate bet pinned at 0 or 1: log return undefined");
    const double q = map->evaluate(pp);
    const double qp = map->slope_at(pp);
    return qp * w * (std::log(s / pp) - std::log((1.0 - s) / (1.0 - pp))) +
           q * (1.0 / s - w / pp) + (1.0 - q) * (w / (1.0 - pp) - 1.0 / (1.0 - s));
  }
};

Curve make_curve(const RationalContext& ctx) {
  if (!(ctx.wealth >= 0.0 && ctx.wealth < 1.0))
    throw DomainError("bettor wealth share must lie in [0,1)");
  return Curve{ctx.wealth, total_bet(ctx.opponents), &ctx.map};
}

constexpr double kEdge = 1e-15;  // interior stand-in for the open endpoints

// Climb to the stationary point inside [lo, hi] by bisecting the derivative
// sign; falls back to golden-section on values when the slope is undefined
// somewhere in the bracket.
double refine_maximum(const Curve& c, double lo, double hi) {
  try {
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      mid = 0.5 * (lo + hi);
      const double d = c.drds(mid);
      if (std::abs(d) < 1e-10) return mid;
      if (d > 0.0) lo = mid; else hi = mid;
    }
    return mid;
  } catch (const NotDifferentiableError&) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
    double f1 = c.r(x1), f2 = c.r(x2);
    while (b - a > 1e-12) {
      if (f1 < f2) {
        a = x1; x1 = x2; f1 = f2;
        x2 = a + kInvPhi * (b - a); f2 = c.r(x2);
      } else {
        b = x2; x2 = x1; f2 = f1;
        x1 = b - kInvPhi * (b - a); f1 = c.r(x1);
      }
    }
    return 0.5 * (a + b);
  }
}

}  // namespace

double RationalContext::aggregate_bet(double s) const {
  return (1.0 - wealth) * total_bet(opponents) + wealth * s;
}

double expected_log_return(const RationalContext& ctx, double s) {
  return make_curve(ctx).r(s);
}

double log_return_derivative(const RationalContext& ctx, double s) {
  return make_curve(ctx).drds(s);
}

OptimalStrategy optimal_strategy(const RationalContext& ctx, std::size_t grid_size) {
  if (grid_size < 3) throw DomainError("grid too small to bracket a maximum");
  const Curve c = make_curve(ctx);

  const std::size_t G = grid_size;
  auto at = [&](std::size_t j) { return static_cast<double>(j) / static_cast<double>(G + 1); };
  std::vector<double> rv(G + 2);
  for (std::size_t j = 1; j <= G; ++j) rv[j] = c.r(at(j));
  rv[0] = rv[G + 1] = -std::numeric_limits<double>::infinity();

  std::vector<std::pair<double, double>> candidates;  // (s, r)
  for (std::size_t j = 1; j <= G; ++j) {
    if (rv[j] < rv[j - 1] || rv[j] < rv[j + 1]) continue;
    // Bracket one grid cell either side; the open interval edges stand in for
    // the missing neighbors so maxima hugging 0 or 1 stay reachable.
    const double lo = j == 1 ? kEdge : at(j - 1);
    const double hi = j == G ? 1.0 - kEdge : at(j + 1);
    const double s_star = refine_maximum(c, lo, hi);
    candidates.emplace_back(s_star, c.r(s_star));
  }
  // Betting the crowd's consensus keeps the odds where they are and breaks
  // even exactly: p(s) = s at s = crowd for any wealth share, and r there is
  // 0.0 to the bit. Including it pins the best value at >= 0.
  if (c.crowd > 0.0 && c.crowd < 1.0) candidates.emplace_back(c.crowd, c.r(c.crowd));

  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [s, r] : candidates) best = std::max(best, r);

  OptimalStrategy out;
  out.value = best;
  std::sort(candidates.begin(), candidates.end());
  for (const auto& [s, r] : candidates) {
    if (r < best - 1e-12) continue;
    if (!out.maximizers.empty() && s - out.maximizers.back() < 1e-9) continue;
    out.maximizers.push_back(s);
  }
  return out;
}

LogReturnCurve sample_log_return_curve(const RationalContext& ctx, std::size_t grid_size) {
  const Curve c = make_curve(ctx);
  LogReturnCurve curve;
  curve.s.resize(grid_size);
  curve.r.resize(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    curve.s[j] = static_cast<double>(j + 1) / static_cast<double>(grid_size + 1);
    curve.r[j] = c.r(curve.s[j]);
  }
  curve.best = optimal_strategy(ctx);
  return curve;
}

bool equilibrium_stability(const RealityMap& map, double w, double p_fixed) {
  if (!(w >= 0.0 && w < 1.0)) throw DomainError("bettor wealth share must lie in [0,1)");
  if (std::abs(map.evaluate(p_fixed) - p_fixed) > 1e-9)
    throw DomainError("p is not a fixed point of the map");
  // Curvature of r at s = p~ is ((1-w)/(s(1-s)))(2 w q' - (1 + w)); the
  // prefactor is positive, so the bracket decides.
  return 2.0 * w * map.slope_at(p_fixed) - (1.0 + w) < 0.0;
}

}  // namespace rg
