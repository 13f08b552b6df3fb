#include "realitygame/population.hpp"

#include <cmath>
#include <string>

namespace rg {
namespace {

// Canonical reduction for all wealth sums: ascending order, four interleaved
// accumulators. Fixed arithmetic regardless of optimization or thread count,
// but a 4x shorter add-latency chain than a single running sum.
double sum4(const double* x, std::size_t n) {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += x[i];
    a1 += x[i + 1];
    a2 += x[i + 2];
    a3 += x[i + 3];
  }
  for (; i < n; ++i) a0 += x[i];
  return (a0 + a1) + (a2 + a3);
}

double dot4(const double* x, const double* y, std::size_t n) {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += x[i] * y[i];
    a1 += x[i + 1] * y[i + 1];
    a2 += x[i + 2] * y[i + 2];
    a3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) a0 += x[i] * y[i];
  return (a0 + a1) + (a2 + a3);
}

}  // namespace

PlayerPopulation PlayerPopulation::uniform_grid(std::size_t n_players) {
  if (n_players == 0) throw DomainError("population must have at least one player");
  PlayerPopulation pop;
  pop.strategies.resize(n_players);
  pop.wealths.assign(n_players, 1.0 / static_cast<double>(n_players));
  for (std::size_t k = 0; k < n_players; ++k)
    pop.strategies[k] = static_cast<double>(k + 1) / static_cast<double>(n_players + 1);
  return pop;
}

PlayerPopulation PlayerPopulation::with_equal_wealth(std::vector<double> strategies) {
  if (strategies.empty()) throw DomainError("population must have at least one player");
  PlayerPopulation pop;
  pop.wealths.assign(strategies.size(), 1.0 / static_cast<double>(strategies.size()));
  pop.strategies = std::move(strategies);
  pop.validate();
  return pop;
}

void PlayerPopulation::validate() const {
  if (strategies.empty() || strategies.size() != wealths.size())
    throw DomainError("strategies and wealths must be nonempty and the same length");
  for (double s : strategies)
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("strategy outside [0,1]: " + std::to_string(s));
  for (double w : wealths)
    if (!(w >= 0.0)) throw DomainError("negative wealth: " + std::to_string(w));
  const double total = sum4(wealths.data(), wealths.size());
  if (std::abs(total - 1.0) > 1e-12)
    throw DomainError("wealths sum to " + std::to_string(total) + ", expected 1");
}

double total_bet(const PlayerPopulation& pop) {
  return dot4(pop.strategies.data(), pop.wealths.data(), pop.size());
}

void apply_outcome_in_place(PlayerPopulation& pop, Outcome outcome) {
  const std::size_t n = pop.size();
  const double p = total_bet(pop);
  const double pool = outcome == Outcome::heads ? p : 1.0 - p;
  if (!(pool > 0.0))
    throw ZeroPoolError(std::string("empty pool on ") +
                        (outcome == Outcome::heads ? "heads" : "tails") +
                        " (aggregate bet p = " + std::to_string(p) + ")");
  const double inv_pool = 1.0 / pool;
  double* w = pop.wealths.data();
  const double* s = pop.strategies.data();
  if (outcome == Outcome::heads) {
    for (std::size_t i = 0; i < n; ++i) w[i] *= s[i] * inv_pool;
  } else {
    for (std::size_t i = 0; i < n; ++i) w[i] *= (1.0 - s[i]) * inv_pool;
  }
  // The updated total is 1 in exact arithmetic; renormalize away the rounding
  // so it cannot random-walk over 1e5+ tosses.
  const double inv_total = 1.0 / sum4(w, n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] *= inv_total;
    if (w[i] < kWealthFloor) w[i] = 0.0;
  }
}

PlayerPopulation apply_outcome(const PlayerPopulation& pop, Outcome outcome) {
  PlayerPopulation next = pop;
  apply_outcome_in_place(next, outcome);
  return next;
}

void GeneralBetMatrix::validate() const {
  if (num_players == 0 || num_outcomes < 2)
    throw DomainError("need at least one player and two outcomes");
  if (bets.size() != num_players * num_outcomes || wealths.size() != num_players)
    throw DomainError("bet matrix dimensions do not match num_players x num_outcomes");
  for (std::size_t i = 0; i < num_players; ++i) {
    double row = 0.0;
    for (std::size_t l = 0; l < num_outcomes; ++l) {
      const double b = bet(i, l);
      if (!(b >= 0.0 && b <= 1.0)) throw DomainError("bet outside [0,1]");
      row += b;
    }
    if (std::abs(row - 1.0) > 1e-12)
      throw DomainError("player " + std::to_string(i) + " bets sum to " + std::to_string(row));
  }
  for (double w : wealths)
    if (!(w >= 0.0)) throw DomainError("negative wealth");
  const double total = sum4(wealths.data(), wealths.size());
  if (std::abs(total - 1.0) > 1e-12)
    throw DomainError("wealths sum to " + std::to_string(total) + ", expected 1");
}

std::vector<double> payoff_general(const GeneralBetMatrix& m, std::size_t winner) {
  if (winner >= m.num_outcomes)
    throw DomainError("winning outcome " + std::to_string(winner) + " out of range");
  double pool = 0.0;
  for (std::size_t i = 0; i < m.num_players; ++i) pool += m.bet(i, winner) * m.wealths[i];
  if (!(pool > 0.0)) throw ZeroPoolError("empty pool on outcome " + std::to_string(winner));
  std::vector<double> out(m.num_players);
  for (std::size_t i = 0; i < m.num_players; ++i)
    out[i] = m.bet(i, winner) * m.wealths[i] / pool;
  return out;
}

}  // namespace rg
