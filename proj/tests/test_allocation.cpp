#include "ammfork/allocation.hpp"
#include "ammfork/oracle.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace ammfork;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {
TraderParams reserves(double ra, double rb, double c = 0.0) {
    TraderParams p;
    p.reserves_a = ra;
    p.reserves_b = rb;
    p.normalized_cost = c;
    return p;
}
}  // namespace

TEST_CASE("trader utility at corners and splits") {
    REQUIRE(trader_utility(1.0, reserves(2, 1, 0.1)) == Approx(-0.6).margin(1e-15));
    REQUIRE(trader_utility(2.0 / 3.0, reserves(2, 1, 0.1)) ==
            Approx(-8.0 / 15.0).margin(1e-15));
    REQUIRE(trader_utility(0.0, reserves(1, 1, 0.0)) == Approx(-1.0).margin(1e-15));
    REQUIRE_THROWS_AS(trader_utility(1.1, reserves(1, 1)), std::invalid_argument);
    REQUIRE_THROWS_AS(trader_utility(-0.1, reserves(1, 1)), std::invalid_argument);
}

TEST_CASE("trader utility is concave on the open interval and peaks at the reserves split") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> res(0.2, 8.0);
    std::uniform_real_distribution<double> cost(0.0, 0.5);
    oracle::OracleConfig cfg;
    cfg.grid_points = 20000;
    const double h = 1.0 / 20001.0;
    for (int i = 0; i < 30; ++i) {
        const TraderParams p = reserves(res(rng), res(rng), cost(rng));
        // strictly negative second differences on an interior grid
        for (double d = 0.1; d <= 0.9; d += 0.1) {
            const double dd = trader_utility(d - 0.05, p) - 2.0 * trader_utility(d, p) +
                              trader_utility(d + 0.05, p);
            REQUIRE(dd < 0.0);
        }
        // interior grid argmax within one cell of R_a/(R_a+R_b)
        TraderParams interior_only = p;
        interior_only.normalized_cost = 0.0;  // free split: the interior always wins
        const double grid = oracle::trader_argmax_grid(interior_only, cfg);
        REQUIRE(grid == Approx(interior_optimum(p)).margin(1.5 * h));
    }
}

TEST_CASE("interior optimum is the reserves proportion") {
    REQUIRE(interior_optimum(reserves(2, 1)) == Approx(2.0 / 3.0).margin(1e-15));
    REQUIRE(interior_optimum(reserves(5, 5)) == 0.5);
    REQUIRE(interior_optimum(reserves(3, 1)) == 0.75);
    oracle::OracleConfig cfg;
    cfg.grid_points = 100000;
    REQUIRE(oracle::trader_argmax_grid(reserves(3, 1, 0.001), cfg) ==
            Approx(0.75).margin(1e-4));
}

TEST_CASE("corner cost threshold separates corner from interior play") {
    REQUIRE(corner_cost_threshold(reserves(2, 1)) == Approx(1.0 / 6.0).margin(1e-15));
    REQUIRE(corner_cost_threshold(reserves(1, 1)) == Approx(0.5).margin(1e-15));
    REQUIRE_THROWS_AS(corner_cost_threshold(reserves(1, 2)), std::invalid_argument);

    // above the threshold the leading corner strictly beats the interior optimum
    const TraderParams above = reserves(2, 1, 0.2);
    REQUIRE(trader_utility(1.0, above) > trader_utility(interior_optimum(above), above));
    const TraderParams below = reserves(2, 1, 0.1);
    REQUIRE(trader_utility(1.0, below) < trader_utility(interior_optimum(below), below));
}

TEST_CASE("corner argmax over the full range once costs clear the threshold") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> res(0.2, 5.0);
    std::uniform_real_distribution<double> bump(1.05, 3.0);
    oracle::OracleConfig cfg;
    cfg.grid_points = 20000;
    for (int i = 0; i < 50; ++i) {
        const double rb = res(rng);
        const double ra = rb * bump(rng);
        TraderParams p = reserves(ra, rb);
        p.normalized_cost = corner_cost_threshold(p) * bump(rng);
        REQUIRE(oracle::trader_argmax_grid(p, cfg) == 1.0);
    }
}

TEST_CASE("normalized cost from raw chain cost") {
    REQUIRE(normalized_cost(10.0, 0.997, 2000.0, 5.0) == Approx(1.994e-4).epsilon(1e-12));
    REQUIRE(normalized_cost(0.0, 0.5, 3.0, 2.0) == 0.0);
    REQUIRE(normalized_cost(1.0, 0.003, 1.0, 1.0) == Approx(0.003).margin(1e-18));
    REQUIRE_THROWS_AS(normalized_cost(1.0, 0.003, 0.0, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(normalized_cost(1.0, 0.003, 1.0, 0.0), std::invalid_argument);
    const TraderParams p = trader_params_from_raw(2.0, 1.0, 10.0, 0.997, 2000.0, 5.0);
    REQUIRE(p.normalized_cost == Approx(1.994e-4).epsilon(1e-12));
}

TEST_CASE("aggregate traders rule follows the reserves leader") {
    REQUIRE(traders_block_rule(0.75, 0.2) == Approx(0.8).margin(1e-15));
    REQUIRE(traders_block_rule(0.3, 0.2) == Approx(0.24).margin(1e-15));
    REQUIRE(traders_block_rule(0.5, 0.2) == Approx(0.5).margin(1e-15));
    REQUIRE(traders_block_rule(1.0, 0.37) == 1.0);
    REQUIRE(traders_block_rule(0.0, 0.37) == 0.0);
    REQUIRE_THROWS_AS(traders_block_rule(1.5, 0.2), std::invalid_argument);
    REQUIRE_THROWS_AS(traders_block_rule(0.5, -0.1), std::invalid_argument);
}

TEST_CASE("small LP utility evaluates the linear yield") {
    REQUIRE(lp_small_utility(1, 1, 1, 0, 1, 1, 0, 0, 0) == Approx(1.0).margin(1e-15));
    REQUIRE(lp_small_utility(2, 1, 1, 1, 1, 1, 0.003, 0, 0) ==
            Approx(1.994).margin(1e-15));
    // equal yields on both sides: utility reduces to (1-gamma) * r
    REQUIRE(lp_small_utility(1, 0.5, 0.6, 0.4, 0.6, 0.4, 0.003, 0, 0) ==
            Approx(0.997).margin(1e-15));
    REQUIRE_THROWS_AS(lp_small_utility(1, 1.5, 1, 1, 1, 1, 0, 0, 0),
                      std::invalid_argument);
}

TEST_CASE("aggregate LP rule equalizes yields, fee case") {
    const LpBlockInputs in{0.6, 0.003, 0.0006, 0.0, 0.0, 0.0};
    const double l = lps_block_rule(in);
    REQUIRE(l == Approx(0.9964 * 0.6 / 0.99664).margin(1e-12));
    REQUIRE(l == Approx(0.5998556).margin(1e-6));
    oracle::OracleConfig cfg;
    REQUIRE(oracle::lp_equalization_sequential(in, cfg) ==
            Approx(l).margin(10.0 * cfg.marginal_chunk));
}

TEST_CASE("aggregate LP rule corner and error cases") {
    REQUIRE(lps_block_rule({1.0, 0.003, 0.4, 0.0, 0.0, 0.0}) == 1.0);
    REQUIRE(lps_block_rule({0.0, 0.003, 0.4, 0.0, 0.0, 0.0}) == 0.0);
    REQUIRE_THROWS_WITH(lps_block_rule({0.5, 0.003, 0.997, 0.0, 0.0, 0.0}),
                        ContainsSubstring("fee space exhausted"));
    REQUIRE_THROWS_AS(lps_block_rule({0.5, 0.003, 0.1, 0.0, 0.7, 0.7}),
                      std::invalid_argument);
}

TEST_CASE("equal fees make the LP rule the identity on T") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double t = unit(rng);
        const double gamma = 0.5 * unit(rng);
        const double phi = 0.8 * (1.0 - gamma) * unit(rng);
        REQUIRE(lps_block_rule({t, gamma, phi, phi, 0.0, 0.0}) == t);
    }
}

TEST_CASE("LP rule is increasing in T and repelled by the fee") {
    const double gamma = 0.003;
    double prev = 0.0;
    for (double t = 0.05; t < 1.0; t += 0.05) {
        const double l = lps_block_rule({t, gamma, 0.2, 0.0, 0.0, 0.0});
        REQUIRE(l > prev);
        prev = l;
        REQUIRE(l < t);  // leader fee drains reserves below the volume share
        // weakly decreasing in phi_a
        REQUIRE(lps_block_rule({t, gamma, 0.3, 0.0, 0.0, 0.0}) <= l);
    }
}

TEST_CASE("LP rule matches the sequential oracle on random instances") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    oracle::OracleConfig cfg;
    const double tol = std::max(1e-6, 10.0 * cfg.marginal_chunk);
    for (int i = 0; i < 200; ++i) {
        LpBlockInputs in;
        in.t_ratio = unit(rng);
        in.gamma = 0.5 * unit(rng);
        in.phi_a = 0.8 * (1.0 - in.gamma) * unit(rng);
        in.phi_b = 0.8 * (1.0 - in.gamma) * unit(rng);
        REQUIRE(lps_block_rule(in) ==
                Approx(oracle::lp_equalization_sequential(in, cfg)).margin(tol));
    }
}

TEST_CASE("lock floors clamp the LP rule exactly") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    oracle::OracleConfig cfg;
    const double tol = std::max(1e-6, 10.0 * cfg.marginal_chunk);
    for (int i = 0; i < 100; ++i) {
        LpBlockInputs in;
        in.t_ratio = unit(rng);
        in.gamma = 0.1 * unit(rng);
        in.phi_a = 0.5 * unit(rng);
        in.phi_b = 0.0;
        in.locked_a_floor = 0.5 * unit(rng);
        in.locked_b_floor = (1.0 - in.locked_a_floor) * unit(rng);
        LpBlockInputs free = in;
        free.locked_a_floor = 0.0;
        free.locked_b_floor = 0.0;
        const double clamped = std::clamp(lps_block_rule(free), in.locked_a_floor,
                                          1.0 - in.locked_b_floor);
        REQUIRE(lps_block_rule(in) == clamped);
        REQUIRE(oracle::lp_equalization_sequential(in, cfg) ==
                Approx(lps_block_rule(in)).margin(tol));
    }
}
