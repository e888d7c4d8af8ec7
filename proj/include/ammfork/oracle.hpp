// Brute-force reference implementations used to validate the closed forms:
// grid maximization of the trader utility, sequential marginal-LP
// equalization, and direct discounted summation. Slow on purpose.
#pragma once

#include "ammfork/allocation.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>

namespace ammfork::oracle {

struct OracleConfig {
    std::size_t grid_points = 1000000;  // interior points for 1-D searches
    double marginal_chunk = 1e-5;       // reserve slice per sequential LP, as a share of R
    std::uint64_t seed = 0;             // for randomized property-test instances
};

namespace detail {
inline void check_config(const OracleConfig& cfg) {
    if (cfg.grid_points < 10) throw std::invalid_argument("grid_points must be >= 10");
    if (!(cfg.marginal_chunk > 0.0 && cfg.marginal_chunk <= 1.0))
        throw std::invalid_argument("marginal_chunk outside (0,1]");
}
}  // namespace detail

/// Argmax of trader_utility over {0,1} and a uniform grid of (0,1).
/// Exact ties keep the lowest delta.
inline double trader_argmax_grid(const TraderParams& p, const OracleConfig& cfg) {
    detail::check_config(cfg);
    double best_delta = 0.0;
    double best_u = trader_utility(0.0, p);
    const double h = 1.0 / static_cast<double>(cfg.grid_points + 1);
    for (std::size_t k = 1; k <= cfg.grid_points; ++k) {
        const double delta = static_cast<double>(k) * h;
        const double u = trader_utility(delta, p);
        if (u > best_u) {
            best_u = u;
            best_delta = delta;
        }
    }
    if (trader_utility(1.0, p) > best_u) best_delta = 1.0;
    return best_delta;
}

/// Greedy sequential equalization: allocate reserve slices one at a time,
/// each to the AMM with the higher marginal yield (1-gamma-phi) V / R at the
/// current allocations. Lock floors are seeded first and act as hard bounds.
/// Ties go to AMM a.
inline double lp_equalization_sequential(const LpBlockInputs& in,
                                         const OracleConfig& cfg) {
    detail::check_config(cfg);
    ammfork::detail::check_lp_inputs(in);
    const double coeff_a = 1.0 - in.gamma - in.phi_a;
    const double coeff_b = 1.0 - in.gamma - in.phi_b;
    const double vol_a = in.t_ratio;
    const double vol_b = 1.0 - in.t_ratio;
    const auto marginal_yield = [](double coeff, double vol, double res) {
        if (vol == 0.0) return 0.0;
        if (res == 0.0) return std::numeric_limits<double>::infinity();
        return coeff * vol / res;
    };

    double share_a = in.locked_a_floor;
    double share_b = in.locked_b_floor;
    const double free_mass = 1.0 - share_a - share_b;
    const auto slices = static_cast<std::uint64_t>(std::llround(free_mass / cfg.marginal_chunk));
    if (slices == 0) return share_a;
    const double dr = free_mass / static_cast<double>(slices);
    for (std::uint64_t i = 0; i < slices; ++i) {
        const double ya = marginal_yield(coeff_a, vol_a, share_a);
        const double yb = marginal_yield(coeff_b, vol_b, share_b);
        if (ya >= yb)
            share_a += dr;
        else
            share_b += dr;
    }
    return share_a;
}

/// Direct evaluation of sum payoffs[i] * eta^i.
inline double discounted_sum_direct(std::span<const double> payoffs, double eta) {
    double sum = 0.0;
    double weight = 1.0;
    for (const double p : payoffs) {
        sum += p * weight;
        weight *= eta;
    }
    return sum;
}

}  // namespace ammfork::oracle
