// Subcommand drivers shared by the CLI binary and the tests. Each runner
// writes CSV (or check lines) to the given sink and returns a process exit
// status; scenario and premise violations surface as exceptions.
#pragma once

#include "ammfork/csv.hpp"
#include "ammfork/dynamics.hpp"
#include "ammfork/oracle.hpp"
#include "ammfork/scenario.hpp"
#include "ammfork/stackelberg.hpp"

#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <thread>
#include <vector>

namespace ammfork {

struct RunOptions {
    std::optional<std::size_t> blocks_override{};
    std::size_t workers = 1;
};

inline GrimForkerState forker_from_scenario(const ScenarioConfig& cfg) {
    GrimForkerState gf;
    gf.phi_threshold = cfg.phi_threshold;
    gf.participation = cfg.participation;
    gf.lock_blocks = cfg.lock_blocks;
    return gf;
}

inline GovernanceParams governance_from_scenario(const ScenarioConfig& cfg) {
    return {cfg.eta, cfg.fee_grid_step, cfg.horizon_tol};
}

inline int run_simulate(const ScenarioConfig& cfg, std::ostream& out,
                        const RunOptions& opts = {}) {
    const SimulationConfig sim{cfg.params,
                               BlockState{cfg.t0, cfg.l0},
                               opts.blocks_override.value_or(cfg.max_blocks),
                               cfg.fixed_point_tol};
    const Trajectory traj = simulate(sim);
    out << "block,T,L,phi_a,leader,forked,block_payoff,discounted_cum_payoff\n";
    double cum = 0.0;
    double weight = 1.0;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const BlockState& st = traj.states[i];
        const double payoff =
            governance_block_payoff(cfg.params.phi_a, st.t_ratio * cfg.params.volume_per_block);
        cum += payoff * weight;
        weight *= cfg.eta;
        out << csv_row(i, st.t_ratio, st.l_ratio, cfg.params.phi_a,
                       to_string(leader_from_reserves(st.l_ratio)), false, payoff, cum);
    }
    out.flush();
    return out.good() ? 0 : 1;
}

inline int run_classify(const ScenarioConfig& cfg, std::ostream& out) {
    const RegimeClass rc = classify_regime(cfg.params, cfg.t0);
    const double s1 = cfg.params.sigma * (1.0 - cfg.params.gamma);
    out << "regime,limit,phi_interior_threshold,phi_decay_threshold\n";
    out << csv_row(to_string(rc.tag), rc.limit_value, s1 / cfg.t0, 2.0 * s1);
    out.flush();
    return out.good() ? 0 : 1;
}

inline int run_equilibrium(const ScenarioConfig& cfg, std::ostream& out) {
    const EquilibriumReport rep = equilibrium_report(cfg.params);
    const double fee_for_t0 =
        cfg.t0 > 0.0 ? equilibrium_fee(cfg.t0, cfg.params.sigma, cfg.params.gamma)
                     : std::numeric_limits<double>::infinity();
    out << "kind,t_star,phi_star,fee_for_t0\n";
    out << csv_row(to_string(rep.kind), rep.t_star, rep.phi_star, fee_for_t0);
    out.flush();
    return out.good() ? 0 : 1;
}

inline int run_stackelberg(const ScenarioConfig& cfg, std::ostream& out) {
    const StackelbergOutcome o = governance_best_response(
        cfg.params, forker_from_scenario(cfg), governance_from_scenario(cfg));
    out << "best_fee,fork_happens,prevent_payoff,fork_payoff,fork_best_fee,threat_active\n";
    out << csv_row(o.best_fee, o.fork_happens, o.prevent_payoff, o.fork_payoff,
                   o.fork_best_fee, o.threat_active);
    out.flush();
    return out.good() ? 0 : 1;
}

namespace detail {

inline double sweep_value(const SweepSpec& spec, std::size_t index) {
    if (spec.steps == 1) return spec.start;
    return spec.start + static_cast<double>(index) * (spec.stop - spec.start) /
                            static_cast<double>(spec.steps - 1);
}

inline std::string sweep_point_row(const ScenarioConfig& base,
                                   const std::vector<std::string>& axis_names,
                                   const std::vector<SweepSpec>& axis_specs,
                                   std::size_t flat_index) {
    // decode flat index in row-major order, first axis most significant
    std::vector<std::size_t> digits(axis_names.size(), 0);
    std::size_t rem = flat_index;
    for (std::size_t a = axis_names.size(); a-- > 0;) {
        digits[a] = rem % axis_specs[a].steps;
        rem /= axis_specs[a].steps;
    }
    ScenarioConfig point = base;
    point.sweeps.clear();
    std::vector<double> values(axis_names.size());
    for (std::size_t a = 0; a < axis_names.size(); ++a) {
        values[a] = sweep_value(axis_specs[a], digits[a]);
        apply_numeric_key(point, axis_names[a], values[a]);
    }
    point = validate_scenario(point);

    const RegimeClass rc = classify_regime(point.params, point.t0);
    const StackelbergOutcome o = governance_best_response(
        point.params, forker_from_scenario(point), governance_from_scenario(point));

    std::string row;
    for (const double v : values) {
        row += format_value(v);
        row += ',';
    }
    row += format_value(to_string(rc.tag));
    row += ',';
    row += format_value(rc.limit_value);
    row += ',';
    row += format_value(o.fork_happens);
    row += ',';
    row += format_value(o.best_fee);
    row += '\n';
    return row;
}

}  // namespace detail

/// Cartesian sweep over the configured axes (ordered by parameter name).
/// Points may be evaluated by a worker pool; rows are emitted in grid order
/// regardless of scheduling, so output is byte-identical for any worker
/// count.
inline int run_sweep(const ScenarioConfig& cfg, std::ostream& out,
                     const RunOptions& opts = {}) {
    if (cfg.sweeps.empty())
        throw std::invalid_argument("sweep requires at least one sweep_<param> axis");
    std::vector<std::string> axis_names;
    std::vector<SweepSpec> axis_specs;
    std::size_t total = 1;
    for (const auto& [name, spec] : cfg.sweeps) {
        axis_names.push_back(name);
        axis_specs.push_back(spec);
        total *= spec.steps;
    }
    if (total == 0) throw std::invalid_argument("sweep grid is empty");

    std::vector<std::string> rows(total);
    const std::size_t workers = std::max<std::size_t>(1, std::min(opts.workers, total));
    if (workers == 1) {
        for (std::size_t i = 0; i < total; ++i)
            rows[i] = detail::sweep_point_row(cfg, axis_names, axis_specs, i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= total) return;
                    try {
                        rows[i] = detail::sweep_point_row(cfg, axis_names, axis_specs, i);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    for (const auto& name : axis_names) out << name << ',';
    out << "regime,limit,fork_happens,best_fee\n";
    for (const auto& row : rows) out << row;
    out.flush();
    return out.good() ? 0 : 1;
}

/// Cross-validates the closed forms against the brute-force references on
/// seeded random instances. Prints one ok/FAIL line per check.
inline int run_oracle_check(const ScenarioConfig& cfg, std::ostream& out) {
    bool all_ok = true;

    {  // LP rule vs sequential marginal equalization
        oracle::OracleConfig ocfg;
        ocfg.marginal_chunk = 1e-5;
        ocfg.seed = 42;
        std::mt19937_64 rng(ocfg.seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double tol = std::max(1e-6, 10.0 * ocfg.marginal_chunk);
        double max_err = 0.0;
        for (int i = 0; i < 1000; ++i) {
            LpBlockInputs in;
            in.t_ratio = unit(rng);
            in.gamma = 0.5 * unit(rng);
            in.phi_a = 0.8 * (1.0 - in.gamma) * unit(rng);
            in.phi_b = 0.8 * (1.0 - in.gamma) * unit(rng);
            const double closed = lps_block_rule(in);
            const double seq = oracle::lp_equalization_sequential(in, ocfg);
            max_err = std::max(max_err, std::abs(closed - seq));
        }
        const bool ok = max_err <= tol;
        all_ok = all_ok && ok;
        out << (ok ? "ok" : "FAIL") << " lp_rule_vs_sequential_oracle max_abs_err="
            << format_value(max_err) << " tol=" << format_value(tol)
            << " instances=1000\n";
    }

    {  // corner/interior decision vs grid argmax
        oracle::OracleConfig ocfg;
        ocfg.grid_points = 100000;
        ocfg.seed = 1234;
        std::mt19937_64 rng(ocfg.seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double h = 1.0 / static_cast<double>(ocfg.grid_points + 1);
        int mismatches = 0;
        int near_threshold = 0;
        for (int i = 0; i < 1000; ++i) {
            TraderParams p;
            p.reserves_b = 0.1 + 9.9 * unit(rng);
            p.reserves_a = p.reserves_b * (1.0 + 4.0 * unit(rng) + 1e-9);
            const double cstar = corner_cost_threshold(p);
            p.normalized_cost = 2.0 * cstar * unit(rng);
            const double band =
                (1.0 / p.reserves_a + 1.0 / p.reserves_b) * (h / 2.0) * (h / 2.0);
            const bool analytic_corner = p.normalized_cost > cstar;
            const bool grid_corner = oracle::trader_argmax_grid(p, ocfg) == 1.0;
            if (std::abs(p.normalized_cost - cstar) <= band) {
                ++near_threshold;
                continue;
            }
            if (analytic_corner != grid_corner) ++mismatches;
        }
        const bool ok = mismatches == 0;
        all_ok = all_ok && ok;
        out << (ok ? "ok" : "FAIL") << " trader_corner_vs_grid mismatches="
            << mismatches << " near_threshold_skipped=" << near_threshold
            << " instances=1000\n";
    }

    {  // discounted utility vs direct summation on a forked path
        const MarketParams params = validate_params({0.2, 0.003, 0.0006, 0.0, 1.0, 1.0});
        GrimForkerState gf = forker_from_scenario(cfg);
        gf.phi_threshold = 0.0006;
        gf.participation = 0.6;
        const GovernanceParams gov{0.5, 1e-4, cfg.horizon_tol};
        const double phi = 0.5;
        std::vector<double> payoffs;
        {
            BlockState st{1.0, 1.0};
            GrimForkerState g = gf;
            const std::size_t horizon = discount_horizon(phi, params.volume_per_block, gov);
            for (std::size_t i = 0; i < horizon; ++i) {
                auto [next, ng] = fork_block_step(st, params, g, phi, i);
                st = next;
                g = ng;
                payoffs.push_back(phi * st.t_ratio * params.volume_per_block);
                if (st.t_ratio == 0.0) break;
            }
        }
        const double direct = oracle::discounted_sum_direct(payoffs, gov.eta);
        const double engine = discounted_governance_utility(phi, params, gf, gov);
        const double err = std::abs(direct - engine);
        const bool ok = err <= gov.horizon_tol;
        all_ok = all_ok && ok;
        out << (ok ? "ok" : "FAIL") << " discounted_utility_vs_direct_sum abs_err="
            << format_value(err) << " tol=" << format_value(gov.horizon_tol) << "\n";
    }

    out.flush();
    return all_ok && out.good() ? 0 : 1;
}

}  // namespace ammfork
