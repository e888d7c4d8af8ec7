#include "ammfork/oracle.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace ammfork;
using Catch::Approx;

TEST_CASE("grid argmax finds interior and corner optima") {
    oracle::OracleConfig cfg;
    cfg.grid_points = 100000;
    TraderParams p;
    p.reserves_a = 2.0;
    p.reserves_b = 1.0;

    p.normalized_cost = 0.01;  // below the 1/6 threshold: interior wins
    REQUIRE(oracle::trader_argmax_grid(p, cfg) == Approx(2.0 / 3.0).margin(1e-4));

    p.normalized_cost = 0.2;  // above the threshold: leading corner wins
    REQUIRE(oracle::trader_argmax_grid(p, cfg) == 1.0);

    // equal reserves and a large cost: corners tie, lowest delta kept
    p.reserves_a = p.reserves_b = 1.0;
    p.normalized_cost = 2.0;
    REQUIRE(oracle::trader_argmax_grid(p, cfg) == 0.0);
}

TEST_CASE("oracle config bounds are enforced") {
    oracle::OracleConfig cfg;
    cfg.grid_points = 5;
    TraderParams p;
    REQUIRE_THROWS_AS(oracle::trader_argmax_grid(p, cfg), std::invalid_argument);
    cfg.grid_points = 100;
    cfg.marginal_chunk = 0.0;
    REQUIRE_THROWS_AS(oracle::lp_equalization_sequential({0.5, 0, 0, 0, 0, 0}, cfg),
                      std::invalid_argument);
}

TEST_CASE("sequential equalization lands on the closed-form share") {
    oracle::OracleConfig cfg;
    const double seq =
        oracle::lp_equalization_sequential({0.6, 0.003, 0.0006, 0.0, 0.0, 0.0}, cfg);
    REQUIRE(seq == Approx(0.599856).margin(10.0 * cfg.marginal_chunk));
    REQUIRE(oracle::lp_equalization_sequential({0.5, 0.01, 0.02, 0.02, 0.0, 0.0}, cfg) ==
            Approx(0.5).margin(10.0 * cfg.marginal_chunk));
    REQUIRE(oracle::lp_equalization_sequential({1.0, 0.003, 0.1, 0.0, 0.0, 0.0}, cfg) ==
            1.0);
}

TEST_CASE("direct discounted summation") {
    std::vector<double> constant(40, 0.0006);
    REQUIRE(oracle::discounted_sum_direct(constant, 0.9) ==
            Approx(0.0006 * (1.0 - std::pow(0.9, 40)) / 0.1).epsilon(1e-12));
    REQUIRE(oracle::discounted_sum_direct({}, 0.9) == 0.0);
}
