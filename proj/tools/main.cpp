// ammfork: block-by-block simulator and equilibrium solver for competing
// AMM forks, with a governance fee-setting player and a fork-commitment
// contract. See README for the config schema.

#include "ammfork/ammfork.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

namespace {

struct CliState {
    std::string config_path;
    std::string out_path = "stdout";
    std::size_t blocks = 0;  // 0 = use config
    std::size_t jobs = 1;
    bool quiet = false;
};

ammfork::ScenarioConfig load(const CliState& cli) {
    if (cli.config_path.empty()) return ammfork::ScenarioConfig{};
    return ammfork::load_config(cli.config_path);
}

int dispatch(const std::string& cmd, const CliState& cli) {
    const ammfork::ScenarioConfig cfg = load(cli);
    ammfork::RunOptions opts;
    if (cli.blocks > 0) opts.blocks_override = cli.blocks;
    opts.workers = cli.jobs;

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (cli.out_path != "stdout" && cli.out_path != "-") {
        file.open(cli.out_path);
        if (!file) {
            std::cerr << "error: cannot open output file '" << cli.out_path << "'\n";
            return 1;
        }
        out = &file;
    }

    if (cmd == "simulate") return ammfork::run_simulate(cfg, *out, opts);
    if (cmd == "classify") return ammfork::run_classify(cfg, *out);
    if (cmd == "equilibrium") return ammfork::run_equilibrium(cfg, *out);
    if (cmd == "stackelberg") return ammfork::run_stackelberg(cfg, *out);
    if (cmd == "sweep") return ammfork::run_sweep(cfg, *out, opts);
    if (cmd == "oracle-check") return ammfork::run_oracle_check(cfg, *out);
    std::cerr << "error: unknown subcommand '" << cmd << "'\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Competing AMM fork simulator and governance game solver"};
    app.require_subcommand(1);

    CliState cli;
    app.add_option("--config", cli.config_path, "Scenario config file (key = value lines)");
    app.add_option("--out", cli.out_path, "Output path, or 'stdout'")->capture_default_str();
    app.add_option("--blocks", cli.blocks, "Override max_blocks for simulate");
    app.add_option("--jobs", cli.jobs, "Worker threads for sweep")->capture_default_str();
    app.add_flag("--quiet", cli.quiet, "Suppress diagnostics on stderr");

    for (const char* name :
         {"simulate", "classify", "equilibrium", "stackelberg", "sweep", "oracle-check"}) {
        app.add_subcommand(name)->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        return dispatch(cmd, cli);
    } catch (const std::exception& e) {
        if (!cli.quiet) std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
