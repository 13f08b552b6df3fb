#include "realitygame/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rg {

double kl_bernoulli(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0))
    throw DomainError("KL arguments must be probabilities");
  if (a == b) return 0.0;
  double r = 0.0;
  if (a > 0.0) {
    if (b == 0.0) return std::numeric_limits<double>::infinity();
    r += a * std::log(a / b);
  }
  if (a < 1.0) {
    if (b == 1.0) return std::numeric_limits<double>::infinity();
    r += (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
  }
  return r < 0.0 ? 0.0 : r;  // clamp rounding residue; KL is nonnegative
}

namespace {

// log(w) + m log(s) + (t - m) log(1-s) with the 0 log 0 convention; -inf
// marks an impossible history for that player.
double log_history_weight(double w, double s, std::size_t m, std::size_t n) {
  if (w <= 0.0) return -std::numeric_limits<double>::infinity();
  double lw = std::log(w);
  if (m > 0) {
    if (s == 0.0) return -std::numeric_limits<double>::infinity();
    lw += static_cast<double>(m) * std::log(s);
  }
  if (n > 0) {
    if (s == 1.0) return -std::numeric_limits<double>::infinity();
    lw += static_cast<double>(n) * std::log1p(-s);
  }
  return lw;
}

}  // namespace

SubjectiveDistribution subjective_heads_distribution(const PlayerPopulation& pop, std::size_t t) {
  pop.validate();
  SubjectiveDistribution dist;
  dist.t = t;
  dist.probability.assign(t + 1, 0.0);

  const std::size_t n_players = pop.size();
  const double lgamma_t1 = std::lgamma(static_cast<double>(t) + 1.0);
  std::vector<double> terms(n_players);
  for (std::size_t m = 0; m <= t; ++m) {
    const double log_binom = lgamma_t1 - std::lgamma(static_cast<double>(m) + 1.0) -
                             std::lgamma(static_cast<double>(t - m) + 1.0);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n_players; ++j) {
      terms[j] = log_history_weight(pop.wealths[j], pop.strategies[j], m, t - m);
      peak = std::max(peak, terms[j]);
    }
    if (peak == -std::numeric_limits<double>::infinity()) continue;  // P_m = 0
    double acc = 0.0;
    for (std::size_t j = 0; j < n_players; ++j)
      if (terms[j] != -std::numeric_limits<double>::infinity()) acc += std::exp(terms[j] - peak);
    dist.probability[m] = std::exp(log_binom + peak) * acc;
  }

  double total = 0.0;
  for (double v : dist.probability) total += v;
  if (!(total > 0.0)) throw DegenerateAllZeroError("subjective distribution has no mass");
  for (double& v : dist.probability) v /= total;
  return dist;
}

std::vector<double> subjective_wealth_given_heads(const PlayerPopulation& pop, std::size_t m,
                                                  std::size_t t) {
  pop.validate();
  if (m > t) throw DomainError("heads count exceeds toss count");
  const std::size_t n_players = pop.size();
  std::vector<double> lw(n_players);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n_players; ++j) {
    lw[j] = log_history_weight(pop.wealths[j], pop.strategies[j], m, t - m);
    peak = std::max(peak, lw[j]);
  }
  if (peak == -std::numeric_limits<double>::infinity())
    throw DegenerateAllZeroError("every player has zero likelihood for this history");
  std::vector<double> out(n_players);
  double total = 0.0;
  for (std::size_t j = 0; j < n_players; ++j) {
    out[j] = std::exp(lw[j] - peak);
    total += out[j];
  }
  for (double& v : out) v /= total;
  return out;
}

double gaussian_drift(double p, double q, std::size_t t) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("drift needs p strictly inside (0,1)");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("q must be a probability");
  if (t == 0) throw DomainError("drift needs t >= 1");
  return (q - p) / static_cast<double>(t);
}

double exact_drift(double p, double q, double dispersion) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("drift needs p strictly inside (0,1)");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("q must be a probability");
  if (!(dispersion >= 0.0)) throw DomainError("dispersion must be nonnegative");
  return (q - p) * dispersion / (p * (1.0 - p));
}

ConvergencePrediction predict_convergence(const RealityMap& map, double p_fixed) {
  if (std::abs(map.evaluate(p_fixed) - p_fixed) > 1e-9)
    throw DomainError("p is not a fixed point of the map");
  const double mu = map.slope_at(p_fixed);
  if (mu >= 1.0)
    throw UnstableFixedPointError("fixed point with slope >= 1 repels; no convergence to predict");

  ConvergencePrediction pred;
  pred.fixed_point = p_fixed;
  pred.slope = mu;
  pred.mean_distance_exponent = mu - 1.0;
  pred.fluctuation_exponent = mu >= 0.0 ? (mu - 1.0) / 2.0 : -0.5;
  const bool boundary = p_fixed == 0.0 || p_fixed == 1.0;
  if (boundary) {
    pred.regime = ConvergenceCase::boundary;
    pred.inefficiency_exponent = (1.0 - mu) / 2.0;
  } else if (mu < 0.0) {
    pred.regime = ConvergenceCase::interior_negative_slope;
    pred.inefficiency_exponent = 1.0;
  } else {
    pred.regime = ConvergenceCase::interior_nonnegative_slope;
    pred.inefficiency_exponent = 1.0 - mu;
  }
  return pred;
}

double interior_inefficiency_expansion(double q_fixed, double mu, double y) {
  if (!(q_fixed > 0.0 && q_fixed < 1.0))
    throw DomainError("interior expansion needs q~ strictly inside (0,1)");
  const double one_minus_mu = 1.0 - mu;
  return 0.5 * one_minus_mu * one_minus_mu * y * y / (q_fixed * (1.0 - q_fixed));
}

double boundary_inefficiency_expansion(double mu, double y) {
  if (!(mu > 0.0 && mu < 1.0)) throw DomainError("boundary expansion needs mu in (0,1)");
  return (1.0 - mu + mu * std::log(mu)) * std::abs(y);
}

std::vector<double> inefficiency_series(const Trajectory& traj) {
  std::vector<double> r(traj.steps);
  for (std::size_t i = 0; i < traj.steps; ++i) {
    const double p = traj.p[i], q = traj.q[i];
    if ((p == 0.0 || p == 1.0) && q != p)
      throw DomainError("aggregate bet pinned at 0 or 1 with q elsewhere: log return is infinite");
    r[i] = kl_bernoulli(q, p);
  }
  return r;
}

PowerLawFit fit_power_law(const std::vector<double>& series, std::size_t t_lo, std::size_t t_hi,
                          std::size_t points_per_decade) {
  if (t_lo < 1 || t_hi <= t_lo || t_hi > series.size())
    throw DomainError("fit window must satisfy 1 <= t_lo < t_hi <= series length");
  if (points_per_decade == 0) throw DomainError("need at least one point per decade");

  // Log-spaced sample times, deduplicated after rounding to integers.
  const double decades = std::log10(static_cast<double>(t_hi) / static_cast<double>(t_lo));
  const std::size_t raw = static_cast<std::size_t>(decades * static_cast<double>(points_per_decade)) + 2;
  std::vector<std::size_t> ts;
  ts.reserve(raw);
  for (std::size_t k = 0; k < raw; ++k) {
    const double frac = raw > 1 ? static_cast<double>(k) / static_cast<double>(raw - 1) : 0.0;
    const double t = static_cast<double>(t_lo) *
                     std::pow(static_cast<double>(t_hi) / static_cast<double>(t_lo), frac);
    const auto ti = static_cast<std::size_t>(std::llround(t));
    if (ti < t_lo || ti > t_hi) continue;
    if (ts.empty() || ts.back() != ti) ts.push_back(ti);
  }
  if (ts.size() < 10) throw DomainError("fit window too narrow: fewer than 10 sample times");

  double sx = 0.0, sy = 0.0;
  std::vector<double> xs(ts.size()), ys(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double v = series[ts[k] - 1];
    if (!(v > 0.0))
      throw NonPositiveDataError("series must be strictly positive inside the fit window");
    xs[k] = std::log(static_cast<double>(ts[k]));
    ys[k] = std::log(v);
    sx += xs[k];
    sy += ys[k];
  }
  const double n = static_cast<double>(ts.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double dx = xs[k] - mx, dy = ys[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  double sse = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double resid = (ys[k] - my) - slope * (xs[k] - mx);
    sse += resid * resid;
  }

  PowerLawFit fit;
  fit.exponent = -slope;
  fit.intercept = my - slope * mx;
  fit.stderr_exponent = std::sqrt(sse / (n - 2.0) / sxx);
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.points_used = ts.size();
  return fit;
}

}  // namespace rg
