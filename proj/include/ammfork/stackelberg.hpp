// Governance as a player, and the commitment contract that attacks it.
//
// Governance sets the protocol fee each block and discounts future fee
// revenue by eta per block. The forker contract pools LP reserves and, the
// moment the fee exceeds its threshold while the vault holds a strict
// reserve majority, redeploys the pool as a feeless fork and locks the
// withdrawn reserves there. Governance therefore chooses between capping
// the fee at the threshold forever and harvesting what it can from a
// draining AMM.
#pragma once

#include "ammfork/dynamics.hpp"

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

namespace ammfork {

struct GovernanceParams {
    double eta = 0.99;          // per-block discount factor in (0,1)
    double fee_grid_step = 1e-4;
    double horizon_tol = 1e-9;  // discounted-tail truncation bound
};

/// Vault + forking clause state. lock_blocks == nullopt means the post-fork
/// lock never expires.
struct GrimForkerState {
    double phi_threshold = 0.0006;
    double participation = 0.0;  // rho: share of total reserves held by the vault
    std::optional<std::uint64_t> lock_blocks{};
    bool forked = false;
    std::optional<std::uint64_t> fork_block{};
};

struct StackelbergOutcome {
    double best_fee = 0.0;
    bool fork_happens = false;
    double prevent_payoff = 0.0;
    double fork_payoff = 0.0;
    double fork_best_fee = 0.0;
    // participation > 1/2; when false the threat is empty and best_fee is
    // simply the unconstrained grid maximum
    bool threat_active = false;
};

namespace detail {
inline void check_governance(const GovernanceParams& gov) {
    if (!(gov.eta > 0.0 && gov.eta < 1.0))
        throw std::invalid_argument("eta outside (0,1)");
    if (!(gov.fee_grid_step > 0.0))
        throw std::invalid_argument("fee_grid_step must be positive");
    if (!(gov.horizon_tol > 0.0))
        throw std::invalid_argument("horizon_tol must be positive");
}

inline void check_forker(const GrimForkerState& gf) {
    if (!(gf.participation >= 0.0 && gf.participation <= 1.0))
        throw std::invalid_argument("participation outside [0,1]");
    if (!(gf.phi_threshold >= 0.0))
        throw std::invalid_argument("phi_threshold negative");
    if (gf.forked != gf.fork_block.has_value())
        throw std::invalid_argument("forked flag and fork_block disagree");
}
}  // namespace detail

/// Per-block Governance revenue: phi * V_gov.
inline double governance_block_payoff(double phi, double v_gov) {
    return phi * v_gov;
}

/// Discounted revenue of holding the fee at the threshold forever:
/// phi_threshold * V / (1 - eta).
inline double prevent_fork_payoff(double phi_threshold, double v, double eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta outside (0,1)");
    return phi_threshold * v / (1.0 - eta);
}

/// Forking clause: fee strictly above the threshold AND the vault holds a
/// strict majority of reserves. Callers consult this only while not forked.
inline bool forking_trigger(double phi_gov, const GrimForkerState& gf) {
    detail::check_forker(gf);
    return phi_gov > gf.phi_threshold && gf.participation > 0.5;
}

/// One block of the forked (or about-to-fork) world. If the clause fires,
/// the vault share moves to the fork before the trader game; while the lock
/// is active the LP rule keeps at least the vault share on the fork side.
/// AMM a carries phi_gov; the fork is feeless.
inline std::pair<BlockState, GrimForkerState> fork_block_step(
    const BlockState& state, const MarketParams& params, GrimForkerState gf,
    double phi_gov, std::uint64_t block_index) {
    validate_params(params);
    validate_state(state);
    detail::check_forker(gf);
    if (!(phi_gov >= 0.0 && phi_gov < 1.0 - params.gamma))
        throw std::invalid_argument("phi_gov outside [0, 1-gamma)");

    BlockState cur = state;
    if (!gf.forked && forking_trigger(phi_gov, gf)) {
        gf.forked = true;
        gf.fork_block = block_index;
        cur.l_ratio = std::min(cur.l_ratio, 1.0 - gf.participation);
    }
    if (!gf.forked) {
        MarketParams p = params;
        p.phi_a = phi_gov;
        return {step(cur, p), gf};
    }
    const bool lock_active =
        !gf.lock_blocks.has_value() ||
        block_index < *gf.fork_block + *gf.lock_blocks;
    const double t = traders_block_rule(cur.l_ratio, params.sigma);
    const double l = lps_block_rule({t, params.gamma, phi_gov, 0.0, 0.0,
                                     lock_active ? gf.participation : 0.0});
    return {BlockState{t, l}, gf};
}

/// Truncation horizon: smallest N with fee_bound * V * eta^N / (1-eta)
/// below horizon_tol.
inline std::size_t discount_horizon(double fee_bound, double volume,
                                    const GovernanceParams& gov) {
    detail::check_governance(gov);
    if (!(fee_bound > 0.0) || !(volume > 0.0)) return 0;
    const double head = fee_bound * volume / (1.0 - gov.eta);
    if (head < gov.horizon_tol) return 0;
    const double n = std::ceil(std::log(gov.horizon_tol / head) / std::log(gov.eta));
    return static_cast<std::size_t>(std::max(n, 1.0));
}

/// Discounted Governance utility of a per-block fee schedule, simulated
/// through fork_block_step from the pre-fork single-AMM state (T = L = 1).
/// Each block contributes phi_i * T_i * V * eta^i, with T_i taken after the
/// block's trader game. fee_bound must dominate the schedule; it sizes the
/// truncation horizon.
template <std::invocable<std::size_t> FeeFn>
double discounted_governance_utility(FeeFn&& fee_at, const MarketParams& params,
                                     GrimForkerState gf, const GovernanceParams& gov,
                                     double fee_bound) {
    validate_params(params);
    detail::check_governance(gov);
    const double v = params.volume_per_block;
    const std::size_t horizon = discount_horizon(fee_bound, v, gov);
    BlockState state{1.0, 1.0};
    double sum = 0.0;
    double weight = 1.0;
    for (std::size_t i = 0; i < horizon; ++i) {
        const double phi = fee_at(i);
        auto [next, next_gf] = fork_block_step(state, params, gf, phi, i);
        state = next;
        gf = next_gf;
        sum += phi * state.t_ratio * v * weight;
        weight *= gov.eta;
        if (state.t_ratio == 0.0) break;  // every later payoff is exactly zero
    }
    return sum;
}

/// Constant-fee overload; the fee itself bounds the schedule.
inline double discounted_governance_utility(double phi, const MarketParams& params,
                                            const GrimForkerState& gf,
                                            const GovernanceParams& gov) {
    return discounted_governance_utility([phi](std::size_t) { return phi; }, params,
                                         gf, gov, phi);
}

/// Governance best response to a deployed forker contract. With an active
/// threat (participation > 1/2) it compares capping the fee at the
/// threshold against the best constant fee above it (fork triggered at
/// block 0), searched on a grid of pitch fee_grid_step up to 1-gamma.
/// Ties go to prevent, and grid ties to the lowest fee.
inline StackelbergOutcome governance_best_response(const MarketParams& params,
                                                   const GrimForkerState& gf,
                                                   const GovernanceParams& gov) {
    validate_params(params);
    detail::check_governance(gov);
    detail::check_forker(gf);
    const double fee_cap = 1.0 - params.gamma;

    if (!(gf.participation > 0.5)) {
        // Empty threat: no fee can trigger the fork and utility is linear in
        // the fee, so the top grid point maximizes.
        std::size_t k_top = static_cast<std::size_t>(fee_cap / gov.fee_grid_step);
        while (k_top > 0 && k_top * gov.fee_grid_step >= fee_cap) --k_top;
        const double best = k_top * gov.fee_grid_step;
        const double payoff = discounted_governance_utility(best, params, gf, gov);
        return {best, false, payoff, 0.0, 0.0, false};
    }

    const double prevent =
        prevent_fork_payoff(gf.phi_threshold, params.volume_per_block, gov.eta);

    double fork_best = -std::numeric_limits<double>::infinity();
    double fork_best_fee = gf.phi_threshold;
    for (std::size_t k = 1;; ++k) {
        const double phi = gf.phi_threshold + static_cast<double>(k) * gov.fee_grid_step;
        if (!(phi < fee_cap)) break;
        const double u = discounted_governance_utility(phi, params, gf, gov);
        if (u > fork_best) {
            fork_best = u;
            fork_best_fee = phi;
        }
    }
    if (std::isinf(fork_best)) fork_best = 0.0;  // no fee above the threshold exists

    const bool fork = fork_best > prevent;
    return {fork ? fork_best_fee : gf.phi_threshold,
            fork,
            prevent,
            fork_best,
            fork_best_fee,
            true};
}

/// Vault participation is rational exactly when the LP has no stake in
/// Governance revenue and expects the threat to deter the fee raise.
inline bool lp_participation_rational(bool no_governance_conflict,
                                      bool believes_prevention) {
    return no_governance_conflict && believes_prevention;
}

/// Per-unit-reserve yield through the vault vs direct allocation. Before a
/// fork both routes sit on the same AMM and are equal by construction; after
/// a fork the vault is locked on the fork side while a direct unit sits on
/// the original AMM.
inline std::pair<double, double> lp_yield_indifference(double t, double l,
                                                       const MarketParams& params) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("t outside [0,1]");
    if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("l outside [0,1]");
    const auto side_yield = [&](double vol_share, double res_share, double fee) {
        const double vol = vol_share * params.volume_per_block;
        const double res = res_share * params.reserves_total;
        if (res == 0.0)
            return vol == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return (1.0 - params.gamma - fee) * vol / res;
    };
    if (t == 1.0 && l == 1.0) {
        const double y = side_yield(1.0, 1.0, params.phi_a);
        return {y, y};
    }
    return {side_yield(1.0 - t, 1.0 - l, params.phi_b),
            side_yield(t, l, params.phi_a)};
}

}  // namespace ammfork
