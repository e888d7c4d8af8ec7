// Block recurrence engine. Each block runs the traders rule and then the
// LPs rule:
//
//   T_i = traders_block_rule(L_{i-1})
//   L_i = lps_block_rule(T_i)
//
// plus fixed-point detection, the no-fee closed form, the asymptotic regime
// classifier, and the fee/ratio equilibrium relations.
#pragma once

#include "ammfork/allocation.hpp"
#include "ammfork/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace ammfork {

struct SimulationConfig {
    MarketParams params;
    BlockState initial;
    std::size_t max_blocks = 100000;
    double fixed_point_tol = 1e-12;
};

/// Leader-fee equilibrium shape: either the monopoly corner T=1 or an
/// interior ratio satisfying phi_star * t_star = sigma (1-gamma).
struct EquilibriumReport {
    enum class Kind { Monopoly, InteriorFee };
    Kind kind = Kind::Monopoly;
    double t_star = 1.0;
    double phi_star = 0.0;
};

/// One block: traders move on the previous reserves share, then LPs
/// re-equalize on the new volume share.
inline BlockState step(const BlockState& state, const MarketParams& params) {
    validate_params(params);
    validate_state(state);
    const double t = traders_block_rule(state.l_ratio, params.sigma);
    const double l =
        lps_block_rule({t, params.gamma, params.phi_a, params.phi_b, 0.0, 0.0});
    return {t, l};
}

/// Iterates step from the initial state for up to max_blocks, stopping
/// early once both per-step movements fall below fixed_point_tol. The
/// returned trajectory includes the initial state at index 0.
inline Trajectory simulate(const SimulationConfig& cfg) {
    if (cfg.max_blocks < 1) throw std::invalid_argument("max_blocks must be >= 1");
    if (!(cfg.fixed_point_tol > 0.0))
        throw std::invalid_argument("fixed_point_tol must be positive");
    validate_params(cfg.params);

    Trajectory traj;
    traj.states.reserve(std::min<std::size_t>(cfg.max_blocks + 1, 1 << 20));
    traj.states.push_back(validate_state(cfg.initial));
    for (std::size_t i = 0; i < cfg.max_blocks; ++i) {
        const BlockState prev = traj.states.back();
        const BlockState next = step(prev, cfg.params);
        traj.states.push_back(next);
        if (std::abs(next.t_ratio - prev.t_ratio) < cfg.fixed_point_tol &&
            std::abs(next.l_ratio - prev.l_ratio) < cfg.fixed_point_tol)
            break;
    }
    return traj;
}

/// Reserves share after i no-fee blocks under unbroken leadership:
/// L_i = 1 - (1-sigma)^i (1-l0).
inline double no_fee_closed_form(double l0, double sigma, std::size_t i) {
    if (!(l0 > 0.5 && l0 <= 1.0))
        throw std::invalid_argument("l0 outside (1/2,1]: closed form needs unbroken leadership");
    if (!(sigma >= 0.0 && sigma <= 1.0))
        throw std::invalid_argument("sigma outside [0,1]");
    return 1.0 - std::pow(1.0 - sigma, static_cast<double>(i)) * (1.0 - l0);
}

/// Fee holding ratio t at equilibrium: sigma (1-gamma) / t. Values at or
/// above 1-gamma mean no achievable interior equilibrium at that ratio.
inline double equilibrium_fee(double t, double sigma, double gamma) {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("t outside (0,1]");
    return sigma * (1.0 - gamma) / t;
}

/// Long-run volume share under leader fee phi_a: min(1, sigma (1-gamma) / phi_a).
/// phi_a = 0 is the no-fee monopoly, limit 1.
inline double equilibrium_ratio(double phi_a, double sigma, double gamma) {
    if (!(phi_a >= 0.0)) throw std::invalid_argument("phi_a negative");
    if (phi_a == 0.0) return 1.0;
    return std::min(1.0, sigma * (1.0 - gamma) / phi_a);
}

/// Asymptotic regime under a leader fee (phi_b must be zero, initial volume
/// share above 1/2). Branches on phi_a against 2 sigma (1-gamma) and
/// sigma (1-gamma) / t0; boundary values take the adjacent closed-form limit.
inline RegimeClass classify_regime(const MarketParams& params, double t0) {
    validate_params(params);
    if (params.phi_b != 0.0)
        throw std::invalid_argument("classify_regime premise: phi_b must be 0");
    if (!(t0 > 0.5 && t0 <= 1.0))
        throw std::invalid_argument("classify_regime premise: t0 outside (1/2,1]");
    const double s1 = params.sigma * (1.0 - params.gamma);
    if (params.phi_a == 0.0) {
        if (params.sigma == 0.0) {
            // degenerate frozen system: every state is stationary
            return t0 < 1.0 ? RegimeClass{Regime::InteriorLimit, t0}
                            : RegimeClass{Regime::GrowToLimit, 1.0};
        }
        return {Regime::GrowToLimit, 1.0};
    }
    if (params.phi_a > 2.0 * s1) return {Regime::DecayToZero, 0.0};
    if (params.phi_a > s1 / t0) return {Regime::InteriorLimit, s1 / params.phi_a};
    return {Regime::GrowToLimit, std::min(1.0, s1 / params.phi_a)};
}

/// Equilibrium shape implied by the configured leader fee.
inline EquilibriumReport equilibrium_report(const MarketParams& params) {
    validate_params(params);
    const double ratio = equilibrium_ratio(params.phi_a, params.sigma, params.gamma);
    if (ratio >= 1.0)
        return {EquilibriumReport::Kind::Monopoly, 1.0, params.phi_a};
    return {EquilibriumReport::Kind::InteriorFee, ratio, params.phi_a};
}

inline std::string to_string(EquilibriumReport::Kind k) {
    return k == EquilibriumReport::Kind::Monopoly ? "Monopoly" : "InteriorFee";
}

}  // namespace ammfork
