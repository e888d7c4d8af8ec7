// Scenario configuration: a flat `key = value` text format with `#`
// comments. Keys are case-sensitive and match the field names below;
// unknown keys are rejected by name. Unset keys keep their defaults.
//
//   sigma gamma phi_a phi_b volume_per_block reserves_total   market
//   t0 l0                                                     initial shares
//   eta phi_threshold participation lock_blocks               governance/forker
//   max_blocks fixed_point_tol fee_grid_step horizon_tol      numerics
//   sweep_<param> = start:stop:steps                          sweep axes
//
// lock_blocks takes an integer or the word "unbounded".
#pragma once

#include "ammfork/core.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ammfork {

struct SweepSpec {
    double start = 0.0;
    double stop = 0.0;
    std::size_t steps = 1;
};

struct ScenarioConfig {
    MarketParams params;
    double t0 = 0.6;
    double l0 = 0.6;
    double eta = 0.99;
    double phi_threshold = 0.0006;
    double participation = 0.6;
    std::optional<std::uint64_t> lock_blocks{};  // unbounded by default
    std::size_t max_blocks = 100000;
    double fixed_point_tol = 1e-12;
    double fee_grid_step = 1e-4;
    double horizon_tol = 1e-9;
    std::map<std::string, SweepSpec> sweeps;  // keyed by parameter name
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': cannot parse number '" + value + "'");
    }
    if (pos != value.size())
        throw std::invalid_argument("config key '" + key + "': trailing characters in '" + value + "'");
    return v;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (!(v >= 0.0) || v != std::floor(v))
        throw std::invalid_argument("config key '" + key + "': expected a nonnegative integer");
    return static_cast<std::uint64_t>(v);
}

}  // namespace detail

/// Assigns a numeric scenario field by key name. Returns false for keys
/// that are not plain numeric parameters (the caller decides whether that
/// is an error). Shared by the parser and the sweep expansion.
inline bool apply_numeric_key(ScenarioConfig& cfg, const std::string& key, double value) {
    if (key == "sigma") cfg.params.sigma = value;
    else if (key == "gamma") cfg.params.gamma = value;
    else if (key == "phi_a") cfg.params.phi_a = value;
    else if (key == "phi_b") cfg.params.phi_b = value;
    else if (key == "volume_per_block") cfg.params.volume_per_block = value;
    else if (key == "reserves_total") cfg.params.reserves_total = value;
    else if (key == "t0") cfg.t0 = value;
    else if (key == "l0") cfg.l0 = value;
    else if (key == "eta") cfg.eta = value;
    else if (key == "phi_threshold") cfg.phi_threshold = value;
    else if (key == "participation") cfg.participation = value;
    else if (key == "fixed_point_tol") cfg.fixed_point_tol = value;
    else if (key == "fee_grid_step") cfg.fee_grid_step = value;
    else if (key == "horizon_tol") cfg.horizon_tol = value;
    else return false;
    return true;
}

/// Validates every cross-field invariant of a parsed scenario.
inline ScenarioConfig validate_scenario(ScenarioConfig cfg) {
    validate_params(cfg.params);
    if (!(cfg.t0 >= 0.0 && cfg.t0 <= 1.0)) throw std::invalid_argument("t0 outside [0,1]");
    if (!(cfg.l0 >= 0.0 && cfg.l0 <= 1.0)) throw std::invalid_argument("l0 outside [0,1]");
    if (!(cfg.eta > 0.0 && cfg.eta < 1.0)) throw std::invalid_argument("eta outside (0,1)");
    if (!(cfg.phi_threshold >= 0.0 && cfg.phi_threshold < 1.0 - cfg.params.gamma))
        throw std::invalid_argument("phi_threshold outside [0, 1-gamma)");
    if (!(cfg.participation >= 0.0 && cfg.participation <= 1.0))
        throw std::invalid_argument("participation outside [0,1]");
    if (cfg.max_blocks < 1) throw std::invalid_argument("max_blocks must be >= 1");
    if (!(cfg.fixed_point_tol > 0.0)) throw std::invalid_argument("fixed_point_tol must be positive");
    if (!(cfg.fee_grid_step > 0.0)) throw std::invalid_argument("fee_grid_step must be positive");
    if (!(cfg.horizon_tol > 0.0)) throw std::invalid_argument("horizon_tol must be positive");
    for (const auto& [key, spec] : cfg.sweeps) {
        if (spec.steps < 1)
            throw std::invalid_argument("sweep over '" + key + "': steps must be >= 1");
    }
    return cfg;
}

inline ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": empty key or value");

        if (apply_numeric_key(cfg, key, detail::parse_double(key, value))) continue;
        if (key == "max_blocks") {
            cfg.max_blocks = static_cast<std::size_t>(detail::parse_uint(key, value));
        } else if (key == "lock_blocks") {
            if (value == "unbounded")
                cfg.lock_blocks.reset();
            else
                cfg.lock_blocks = detail::parse_uint(key, value);
        } else if (key.rfind("sweep_", 0) == 0) {
            const std::string param = key.substr(6);
            ScenarioConfig probe;
            if (!apply_numeric_key(probe, param, 0.0))
                throw std::invalid_argument("unknown sweep parameter '" + param + "'");
            SweepSpec spec;
            std::istringstream vs(value);
            std::string part;
            if (!std::getline(vs, part, ':'))
                throw std::invalid_argument("config key '" + key + "': expected start:stop:steps");
            spec.start = detail::parse_double(key, detail::trim(part));
            if (!std::getline(vs, part, ':'))
                throw std::invalid_argument("config key '" + key + "': expected start:stop:steps");
            spec.stop = detail::parse_double(key, detail::trim(part));
            if (!std::getline(vs, part, ':'))
                throw std::invalid_argument("config key '" + key + "': expected start:stop:steps");
            spec.steps = static_cast<std::size_t>(detail::parse_uint(key, detail::trim(part)));
            if (std::getline(vs, part, ':'))
                throw std::invalid_argument("config key '" + key + "': too many fields");
            cfg.sweeps[param] = spec;
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
    return validate_scenario(cfg);
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    return parse_config(in);
}

}  // namespace ammfork
