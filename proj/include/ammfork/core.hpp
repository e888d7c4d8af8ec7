// Core domain types for the two-fork AMM allocation model: the immutable
// market environment, per-block allocation ratios, market leadership, and
// asymptotic regime tags. Everything here is a plain value type.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ammfork {

/// Immutable game environment. Fees and shares are fractions; volume and
/// reserves are per-block totals in units of the alpha token.
struct MarketParams {
    double sigma = 0.2;             // sensitive traders proportion
    double gamma = 0.003;           // trading fee parameter
    double phi_a = 0.0006;          // protocol fee of AMM a
    double phi_b = 0.0;             // protocol fee of AMM b
    double volume_per_block = 1.0;  // V
    double reserves_total = 1.0;    // R

    bool operator==(const MarketParams&) const = default;
};

/// Volume share (T) and reserves share (L) of AMM a for one block.
struct BlockState {
    double t_ratio = 0.0;
    double l_ratio = 0.0;

    bool operator==(const BlockState&) const = default;
};

enum class Leader { AmmA, AmmB, Tie };

enum class Regime { DecayToZero, InteriorLimit, GrowToLimit };

/// Outcome of the asymptotic classification: the regime tag plus lim T_i.
struct RegimeClass {
    Regime tag = Regime::DecayToZero;
    double limit_value = 0.0;

    bool operator==(const RegimeClass&) const = default;
};

/// Block-indexed time series; states[0] is the initial block.
struct Trajectory {
    std::vector<BlockState> states;

    const BlockState& initial() const { return states.front(); }
    const BlockState& final_state() const { return states.back(); }
};

inline std::string to_string(Leader l) {
    switch (l) {
        case Leader::AmmA: return "AmmA";
        case Leader::AmmB: return "AmmB";
        default: return "Tie";
    }
}

inline std::string to_string(Regime r) {
    switch (r) {
        case Regime::DecayToZero: return "DecayToZero";
        case Regime::InteriorLimit: return "InteriorLimit";
        default: return "GrowToLimit";
    }
}

/// Checks every MarketParams invariant and returns the params unchanged.
/// Throws std::invalid_argument naming the first violated invariant.
inline MarketParams validate_params(MarketParams p) {
    if (!(p.sigma >= 0.0 && p.sigma <= 1.0))
        throw std::invalid_argument("sigma outside [0,1]");
    if (!(p.gamma >= 0.0 && p.gamma < 1.0))
        throw std::invalid_argument("gamma outside [0,1)");
    if (!(p.phi_a >= 0.0))
        throw std::invalid_argument("phi_a negative");
    if (!(p.phi_a < 1.0 - p.gamma))
        throw std::invalid_argument("phi_a: fee exceeds 1-gamma");
    if (!(p.phi_b >= 0.0))
        throw std::invalid_argument("phi_b negative");
    if (!(p.phi_b < 1.0 - p.gamma))
        throw std::invalid_argument("phi_b: fee exceeds 1-gamma");
    if (!(p.volume_per_block > 0.0))
        throw std::invalid_argument("volume_per_block must be positive");
    if (!(p.reserves_total > 0.0))
        throw std::invalid_argument("reserves_total must be positive");
    return p;
}

inline BlockState validate_state(BlockState s) {
    if (!(s.t_ratio >= 0.0 && s.t_ratio <= 1.0))
        throw std::invalid_argument("t_ratio outside [0,1]");
    if (!(s.l_ratio >= 0.0 && s.l_ratio <= 1.0))
        throw std::invalid_argument("l_ratio outside [0,1]");
    return s;
}

/// Market leadership keyed on the reserves share: AmmA above 1/2, AmmB
/// below, Tie at exactly 1/2.
inline Leader leader_from_reserves(double l_ratio) {
    if (!(l_ratio >= 0.0 && l_ratio <= 1.0))
        throw std::invalid_argument("l_ratio outside [0,1]");
    if (l_ratio > 0.5) return Leader::AmmA;
    if (l_ratio < 0.5) return Leader::AmmB;
    return Leader::Tie;
}

}  // namespace ammfork
