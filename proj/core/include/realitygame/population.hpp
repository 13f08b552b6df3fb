#pragma once

#include <cstddef>
#include <vector>

#include "realitygame/errors.hpp"

namespace rg {

enum class Outcome : unsigned char { tails = 0, heads = 1 };

// Wealth below this is treated as extinct: the entry is zeroed so later
// updates cannot produce subnormals or 0/0.
inline constexpr double kWealthFloor = 1e-300;

// A betting crowd. Player i commits fraction strategies[i] of her wealth to
// heads and the rest to tails, every round. Wealths sum to 1: the population
// *is* the betting pool.
struct PlayerPopulation {
  std::vector<double> strategies;
  std::vector<double> wealths;

  std::size_t size() const { return strategies.size(); }

  // n players on the open grid k/(n+1), k = 1..n, equal wealth.
  static PlayerPopulation uniform_grid(std::size_t n_players);
  static PlayerPopulation with_equal_wealth(std::vector<double> strategies);

  // DomainError unless: sizes match and are nonzero, strategies in [0,1],
  // wealths nonnegative, and total wealth within 1e-12 of 1.
  void validate() const;
};

// Aggregate heads bet p = sum_i s_i w_i. Also the price of heads: a bettor
// playing s = p keeps her wealth no matter what happens.
double total_bet(const PlayerPopulation& pop);

// Settle one toss. Winners split the whole pool in proportion to their bets:
// heads pays w_i' = s_i w_i / p, tails pays w_i' = (1-s_i) w_i / (1-p).
// This is simultaneously a Bayesian update of wealth-as-prior with the
// strategies as likelihoods. The result is renormalized (and entries under
// kWealthFloor zeroed) so conservation can't drift over long runs.
// ZeroPoolError when the realized side of the book is empty.
PlayerPopulation apply_outcome(const PlayerPopulation& pop, Outcome outcome);

// In-place variant with identical arithmetic; the simulation loop uses this
// to avoid reallocating every toss.
void apply_outcome_in_place(PlayerPopulation& pop, Outcome outcome);

// General book with L >= 2 mutually exclusive outcomes. Row i of `bets`
// is player i's allocation over outcomes and sums to 1. For L = 2, column 0
// plays the role of heads.
struct GeneralBetMatrix {
  std::size_t num_players = 0;
  std::size_t num_outcomes = 0;
  std::vector<double> bets;     // row-major num_players x num_outcomes
  std::vector<double> wealths;  // sums to 1

  double bet(std::size_t player, std::size_t outcome) const {
    return bets[player * num_outcomes + outcome];
  }
  void validate() const;
};

// Post-toss wealth when outcome column `winner` occurs:
// pi_i = bet(i, winner) w_i / pool, pool = sum_i bet(i, winner) w_i.
// ZeroPoolError if the pool is empty; DomainError if winner is out of range.
std::vector<double> payoff_general(const GeneralBetMatrix& m, std::size_t winner);

}  // namespace rg
