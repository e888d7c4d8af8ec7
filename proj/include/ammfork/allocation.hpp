// Single-block game outcomes.
//
// Traders split a fixed trade between the two forks; their utility over the
// split fraction d is
//
//   u_t(d) = -d^2/R_a - (1-d)^2/R_b - cost,   cost = c at the corners, 2c split
//
// which is maximized on (0,1) at the reserves proportion R_a/(R_a+R_b).
// Small LPs earn linear yield per unit reserve, so the aggregate block
// outcome is the share at which per-unit yields equalize across the forks.
#pragma once

#include "ammfork/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ammfork {

/// Inputs of the single-trader allocation problem. normalized_cost is the
/// per-venue transaction cost after dividing out the fixed trade terms; the
/// raw fields are carried when it was derived from chain costs.
struct TraderParams {
    double reserves_a = 1.0;
    double reserves_b = 1.0;
    double normalized_cost = 0.0;  // c
    double raw_cost = 0.0;         // c0
    double amm_price = 1.0;        // m_u, beta per alpha
    double trade_size = 1.0;       // Delta
};

/// c = c0 * gamma / (m_u * Delta^2)
inline double normalized_cost(double raw_cost, double gamma, double amm_price,
                              double trade_size) {
    if (!(amm_price > 0.0)) throw std::invalid_argument("amm_price must be positive");
    if (!(trade_size > 0.0)) throw std::invalid_argument("trade_size must be positive");
    if (!(raw_cost >= 0.0)) throw std::invalid_argument("raw_cost negative");
    return raw_cost * gamma / (amm_price * trade_size * trade_size);
}

inline TraderParams trader_params_from_raw(double reserves_a, double reserves_b,
                                           double raw_cost, double gamma,
                                           double amm_price, double trade_size) {
    TraderParams p;
    p.reserves_a = reserves_a;
    p.reserves_b = reserves_b;
    p.raw_cost = raw_cost;
    p.amm_price = amm_price;
    p.trade_size = trade_size;
    p.normalized_cost = normalized_cost(raw_cost, gamma, amm_price, trade_size);
    return p;
}

namespace detail {
inline void check_trader(const TraderParams& p) {
    if (!(p.reserves_a > 0.0 && p.reserves_b > 0.0))
        throw std::invalid_argument("reserves must be positive");
    if (!(p.normalized_cost >= 0.0))
        throw std::invalid_argument("normalized_cost negative");
}
}  // namespace detail

/// Trader utility of allocating fraction delta to AMM a. The transaction
/// cost doubles when the trade is split across both AMMs.
inline double trader_utility(double delta, const TraderParams& p) {
    detail::check_trader(p);
    if (!(delta >= 0.0 && delta <= 1.0))
        throw std::invalid_argument("delta outside [0,1]");
    const double cost =
        (delta == 0.0 || delta == 1.0) ? p.normalized_cost : 2.0 * p.normalized_cost;
    return -delta * delta / p.reserves_a -
           (1.0 - delta) * (1.0 - delta) / p.reserves_b - cost;
}

/// Maximizer of u_t on the open interval: R_a/(R_a+R_b).
inline double interior_optimum(const TraderParams& p) {
    detail::check_trader(p);
    return p.reserves_a / (p.reserves_a + p.reserves_b);
}

/// Cost level at which the leading corner d=1 ties the interior optimum:
/// c* = R_b / (R_a (R_a + R_b)). Above it the corner strictly wins.
/// Requires R_a >= R_b so that d=1 is the leading corner.
inline double corner_cost_threshold(const TraderParams& p) {
    detail::check_trader(p);
    if (p.reserves_a < p.reserves_b)
        throw std::invalid_argument(
            "reserves_a < reserves_b: leading corner is delta=0, swap sides");
    return p.reserves_b / (p.reserves_a * (p.reserves_a + p.reserves_b));
}

/// Aggregate trader share of AMM a given the previous reserves share:
/// sensitive traders follow the reserves leader, the rest split at the
/// reserves proportion. A tie splits the sensitive mass evenly.
inline double traders_block_rule(double prev_l, double sigma) {
    if (!(prev_l >= 0.0 && prev_l <= 1.0))
        throw std::invalid_argument("prev_l outside [0,1]");
    if (!(sigma >= 0.0 && sigma <= 1.0))
        throw std::invalid_argument("sigma outside [0,1]");
    if (prev_l == 1.0) return 1.0;  // absorbing
    switch (leader_from_reserves(prev_l)) {
        case Leader::AmmA: return sigma + (1.0 - sigma) * prev_l;
        case Leader::AmmB: return (1.0 - sigma) * prev_l;
        default: return sigma / 2.0 + (1.0 - sigma) * prev_l;
    }
}

/// Small-LP utility of splitting r into r_a on AMM a and r-r_a on AMM b:
/// (1-gamma-phi_a) V_a r_a/R_a + (1-gamma-phi_b) V_b (r-r_a)/R_b.
inline double lp_small_utility(double r, double r_a, double v_a, double v_b,
                               double reserves_a, double reserves_b, double gamma,
                               double phi_a, double phi_b) {
    if (!(reserves_a > 0.0 && reserves_b > 0.0))
        throw std::invalid_argument("reserves must be positive");
    if (!(r_a >= 0.0 && r_a <= r))
        throw std::invalid_argument("r_a outside [0,r]");
    return (1.0 - gamma - phi_a) * v_a * r_a / reserves_a +
           (1.0 - gamma - phi_b) * v_b * (r - r_a) / reserves_b;
}

/// Per-block inputs of the aggregate LP rule. Lock floors are minimum
/// reserves shares pinned on each side (used for post-fork lock-ups).
struct LpBlockInputs {
    double t_ratio = 0.0;
    double gamma = 0.0;
    double phi_a = 0.0;
    double phi_b = 0.0;
    double locked_a_floor = 0.0;
    double locked_b_floor = 0.0;
};

namespace detail {
inline void check_lp_inputs(const LpBlockInputs& in) {
    if (!(in.t_ratio >= 0.0 && in.t_ratio <= 1.0))
        throw std::invalid_argument("t_ratio outside [0,1]");
    if (!(1.0 - in.gamma - in.phi_a > 0.0) || !(1.0 - in.gamma - in.phi_b > 0.0))
        throw std::invalid_argument("fee space exhausted: 1-gamma-phi must be positive");
    if (!(in.locked_a_floor >= 0.0 && in.locked_a_floor <= 1.0) ||
        !(in.locked_b_floor >= 0.0 && in.locked_b_floor <= 1.0))
        throw std::invalid_argument("lock floor outside [0,1]");
    if (!(in.locked_a_floor + in.locked_b_floor <= 1.0))
        throw std::invalid_argument("lock floors exceed total reserves");
}
}  // namespace detail

/// Aggregate reserves share of AMM a: free reserves flow until per-unit
/// yields equalize,
///
///   L* = A T / (A T + B (1-T)),   A = 1-gamma-phi_a, B = 1-gamma-phi_b,
///
/// then the result is clamped into the unlocked band
/// [locked_a_floor, 1-locked_b_floor].
inline double lps_block_rule(const LpBlockInputs& in) {
    detail::check_lp_inputs(in);
    const double t = in.t_ratio;
    double share;
    if (t == 0.0) {
        share = 0.0;
    } else if (t == 1.0) {
        share = 1.0;
    } else if (in.phi_a == in.phi_b) {
        share = t;  // equal fees: yields equalize exactly at the volume share
    } else {
        const double weight_a = (1.0 - in.gamma - in.phi_a) * t;
        const double weight_b = (1.0 - in.gamma - in.phi_b) * (1.0 - t);
        share = weight_a / (weight_a + weight_b);
    }
    return std::clamp(share, in.locked_a_floor, 1.0 - in.locked_b_floor);
}

}  // namespace ammfork
