#pragma once

#include <cstddef>
#include <vector>

#include "realitygame/engine.hpp"
#include "realitygame/kl.hpp"
#include "realitygame/population.hpp"
#include "realitygame/reality_map.hpp"

namespace rg {

struct SubjectiveDistribution {
  std::size_t t = 0;
  std::vector<double> probability;  // index = heads count m, size t + 1
};

// P(m heads in t tosses) under the crowd's own odds: the initial-wealth
// mixture of binomials sum_j w_j C(t,m) s_j^m (1-s_j)^(t-m). Evaluated in log
// space (lgamma + log-sum-exp) and normalized on exit, so it stays finite for
// t in the 1e5 range.
SubjectiveDistribution subjective_heads_distribution(const PlayerPopulation& pop, std::size_t t);

// Wealth after t tosses of which m came up heads — any order, same answer:
// w_i proportional to w_i(0) s_i^m (1-s_i)^(t-m), computed with
// max-subtracted exponentials. DegenerateAllZeroError when every player has
// zero likelihood (e.g. only s = 0 players and m > 0).
std::vector<double> subjective_wealth_given_heads(const PlayerPopulation& pop, std::size_t m,
                                                  std::size_t t);

// Expected one-toss move of p when the wealth spread over strategies has
// collapsed to the t-toss Gaussian limit: E[dp] = (q - p)/t.
double gaussian_drift(double p, double q, std::size_t t);

// The exact form for any wealth spread, with D the wealth-weighted variance
// of strategies: E[dp] = (q - p) D / (p(1-p)). Matches gaussian_drift when
// D = p(1-p)/t.
double exact_drift(double p, double q, double dispersion);

enum class ConvergenceCase {
  interior_negative_slope,  // oscillating approach
  interior_nonnegative_slope,
  boundary
};

struct ConvergencePrediction {
  double fixed_point = 0.0;
  double slope = 0.0;  // mu = q'(p~)
  ConvergenceCase regime = ConvergenceCase::interior_nonnegative_slope;
  double mean_distance_exponent = 0.0;   // |E[p_t - p~]| ~ t^(mu - 1)
  double fluctuation_exponent = 0.0;     // spread ~ t^((mu-1)/2), or t^(-1/2) when mu < 0
  double inefficiency_exponent = 0.0;    // gamma: mean log return ~ t^(-gamma)
};

// The decay-rate trichotomy at an attracting fixed point:
//   interior, mu < 0   -> gamma = 1
//   interior, mu >= 0  -> gamma = 1 - mu
//   boundary (p~ 0 or 1) -> gamma = (1 - mu)/2
// UnstableFixedPointError when mu >= 1; DomainError when p~ is not fixed.
ConvergencePrediction predict_convergence(const RealityMap& map, double p_fixed);

// Leading small-deviation forms of KL(q~ + mu y || q~ + y):
//   interior: (1/2)(1 - mu)^2 y^2 / (q~(1 - q~))
//   boundary: (1 - mu + mu log mu) |y|
double interior_inefficiency_expansion(double q_fixed, double mu, double y);
double boundary_inefficiency_expansion(double mu, double y);

// Per-toss KL(q_t || p_t) along a trajectory: what a bettor reading the true
// odds would have earned. DomainError if some p_t sits on 0 or 1 while
// q_t differs.
std::vector<double> inefficiency_series(const Trajectory& traj);

struct PowerLawFit {
  double exponent = 0.0;  // gamma_hat in series ~ t^(-gamma_hat)
  double intercept = 0.0; // log-log intercept
  double stderr_exponent = 0.0;
  double r_squared = 0.0;
  std::size_t t_lo = 0, t_hi = 0;
  std::size_t points_used = 0;
};

// OLS of log series[t] on log t over log-spaced sample times (default 64 per
// decade), window [t_lo, t_hi] inclusive; series is indexed from t = 1.
// NonPositiveDataError if a sampled value <= 0; DomainError when fewer than
// 10 sample times land inside the window.
PowerLawFit fit_power_law(const std::vector<double>& series, std::size_t t_lo, std::size_t t_hi,
                          std::size_t points_per_decade = 64);

}  // namespace rg
