#include <doctest.h>

#include <cmath>

#include "realitygame/errors.hpp"
#include "realitygame/rational.hpp"

using namespace rg;

namespace {

// Single opponent betting 1/2 with all the crowd's wealth.
RationalContext centered_crowd(double wealth, RealityMap map) {
  RationalContext ctx;
  ctx.opponents = PlayerPopulation::with_equal_wealth({0.5});
  ctx.wealth = wealth;
  ctx.map = std::move(map);
  return ctx;
}

}  // namespace

TEST_SUITE("rational") {

TEST_CASE("aggregate bet mixes the crowd and the bettor by wealth") {
  RationalContext ctx;
  ctx.opponents = PlayerPopulation::with_equal_wealth({0.7});
  ctx.wealth = 0.2;
  CHECK(ctx.aggregate_bet(0.5) == doctest::Approx(0.66).epsilon(1e-15));
  CHECK(ctx.aggregate_bet(0.0) == doctest::Approx(0.56).epsilon(1e-15));

  // Opponent wealths are normalized among themselves before mixing.
  RationalContext mixed;
  mixed.opponents.strategies = {0.2, 0.8};
  mixed.opponents.wealths = {0.75, 0.25};
  mixed.wealth = 0.5;
  // crowd = 0.75*0.2 + 0.25*0.8 = 0.35; p = 0.5*0.35 + 0.5*0.9
  CHECK(mixed.aggregate_bet(0.9) == doctest::Approx(0.625).epsilon(1e-14));
}

TEST_CASE("log return against a measure-zero bettor at even odds") {
  const RationalContext ctx = centered_crowd(0.0, RealityMap::identity());
  // r(0.6) = 0.5 log(1.2) + 0.5 log(0.8) = 0.5 log(0.96)
  CHECK(expected_log_return(ctx, 0.6) ==
        doctest::Approx(-0.02041099726012756).epsilon(1e-14));
  CHECK_THROWS_AS(expected_log_return(ctx, 0.0), DomainError);
  CHECK_THROWS_AS(expected_log_return(ctx, 1.0), DomainError);
}

TEST_CASE("betting along with the crowd earns exactly zero") {
  for (double w : {0.0, 0.25, 0.6}) {
    const RationalContext ctx = centered_crowd(w, RealityMap::arctan_family(2.0));
    CHECK(expected_log_return(ctx, 0.5) == 0.0);
  }
}

TEST_CASE("analytic derivative agrees with finite differences") {
  RationalContext ctx;
  ctx.opponents = PlayerPopulation::uniform_grid(3);
  ctx.wealth = 0.3;
  ctx.map = RealityMap::arctan_family(2.0);
  const double h = 1e-7;
  for (double s : {0.2, 0.35, 0.65, 0.8}) {
    const double fd =
        (expected_log_return(ctx, s + h) - expected_log_return(ctx, s - h)) / (2.0 * h);
    const double an = log_return_derivative(ctx, s);
    CHECK(std::abs(an - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("a measure-zero bettor plays Kelly: bet the objective probability") {
  for (double c : {0.3, 0.7, 0.55}) {
    const RationalContext ctx = centered_crowd(0.0, RealityMap::constant(c));
    const OptimalStrategy best = optimal_strategy(ctx);
    REQUIRE(best.maximizers.size() == 1);
    CHECK(best.maximizers[0] == doctest::Approx(c).epsilon(1e-8));
    CHECK(best.value >= 0.0);
  }
}

TEST_CASE("below the destabilizing threshold the center is the unique optimum") {
  const RationalContext ctx = centered_crowd(0.2, RealityMap::arctan_family(2.0));
  const OptimalStrategy best = optimal_strategy(ctx);
  REQUIRE(best.maximizers.size() == 1);
  CHECK(best.maximizers[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(best.value == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("above the threshold the optimum splits into a symmetric pair") {
  const RationalContext big = centered_crowd(0.6, RealityMap::arctan_family(2.0));
  const OptimalStrategy pair = optimal_strategy(big);
  REQUIRE(pair.maximizers.size() == 2);
  CHECK(pair.maximizers[0] == doctest::Approx(0.16967231847497952).epsilon(1e-7));
  CHECK(pair.maximizers[1] == doctest::Approx(0.83032768152502046).epsilon(1e-7));
  CHECK(pair.maximizers[0] + pair.maximizers[1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(pair.value == doctest::Approx(0.0314174561233078).epsilon(1e-9));

  // Just past the threshold the split is already resolvable.
  const RationalContext near = centered_crowd(0.34, RealityMap::arctan_family(2.0));
  const OptimalStrategy close = optimal_strategy(near);
  REQUIRE(close.maximizers.size() == 2);
  CHECK(close.maximizers[0] == doctest::Approx(0.42549180326841368).epsilon(1e-5));
  CHECK(close.value == doctest::Approx(7.3434450163993581e-05).epsilon(1e-6));
}

TEST_CASE("equilibrium stability flips where 2wq' = 1 + w") {
  const RealityMap map = RealityMap::arctan_family(2.0);
  // q'(1/2) = 2, so the bracket 2w*2 - (1+w) = 3w - 1 flips at w = 1/3.
  CHECK(equilibrium_stability(map, 1.0 / 3.0 - 1e-6, 0.5));
  CHECK(!equilibrium_stability(map, 1.0 / 3.0 + 1e-6, 0.5));
  CHECK(equilibrium_stability(map, 0.0, 0.5));

  CHECK_THROWS_AS(equilibrium_stability(map, 0.2, 0.3), DomainError);  // not a fixed point
  CHECK_THROWS_AS(equilibrium_stability(map, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(equilibrium_stability(map, -0.1, 0.5), DomainError);
}

TEST_CASE("sampled curve matches pointwise evaluation and carries the optimum") {
  const RationalContext ctx = centered_crowd(0.45, RealityMap::arctan_family(2.0));
  const LogReturnCurve curve = sample_log_return_curve(ctx, 256);
  REQUIRE(curve.s.size() == 256);
  REQUIRE(curve.r.size() == 256);
  for (std::size_t i = 1; i < curve.s.size(); ++i) {
    CHECK(curve.s[i] > curve.s[i - 1]);
    CHECK(curve.s[i] < 1.0);
  }
  CHECK(curve.s.front() > 0.0);
  for (std::size_t i = 0; i < curve.s.size(); i += 37) {
    CHECK(curve.r[i] == doctest::Approx(expected_log_return(ctx, curve.s[i])).epsilon(1e-13));
  }
  const OptimalStrategy direct = optimal_strategy(ctx);
  REQUIRE(!curve.best.maximizers.empty());
  CHECK(curve.best.value == doctest::Approx(direct.value).epsilon(1e-10));
}

}  // TEST_SUITE
