// Batch driver: runs the verification suites and the worked examples,
// writing CSV/JSON artifacts. Exit codes: 0 pass, 1 verification failure,
// 2 configuration error.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pmech/commands.hpp"
#include "pmech/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"p-mechanics batch runner"};
    app.require_subcommand(0, 1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path;
    std::string out_dir;
    std::string format;
    std::string suite;
    std::string seed_str;
    app.add_option("--config", config_path, "configuration file (key = value with [sections])");
    app.add_option("--out", out_dir, "output directory (default: $PMECH_OUT_DIR or cwd)");
    app.add_option("--format", format, "csv|json|both");
    app.add_option("--suite", suite, "restrict verify to one suite");
    app.add_option("--seed", seed_str, "64-bit seed for all randomised checks");

    auto* c_verify = app.add_subcommand("verify", "run all module verification suites");
    auto* c_osc = app.add_subcommand("oscillator", "forced-oscillator trajectories");
    auto* c_cl = app.add_subcommand("classical-limit", "kernel-state classical limit sweep");
    auto* c_ct = app.add_subcommand("cantrans", "canonical-transformation residual tables");
    auto* c_kp = app.add_subcommand("kepler", "radial spectrum and discrepancy report");

    CLI11_PARSE(app, argc, argv);

    pmech::RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = pmech::load_config(config_path);
        if (c_verify->parsed()) cfg.command = pmech::RunConfig::Command::Verify;
        else if (c_osc->parsed()) cfg.command = pmech::RunConfig::Command::Oscillator;
        else if (c_cl->parsed()) cfg.command = pmech::RunConfig::Command::ClassicalLimit;
        else if (c_ct->parsed()) cfg.command = pmech::RunConfig::Command::Cantrans;
        else if (c_kp->parsed()) cfg.command = pmech::RunConfig::Command::Kepler;
        else if (!cfg.command_set && config_path.empty()) {
            std::cerr << "no command given (subcommand or 'command =' in the config)\n";
            return 2;
        }
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (cfg.output_dir.empty()) {
            if (const char* env = std::getenv("PMECH_OUT_DIR")) cfg.output_dir = env;
        }
        if (!format.empty()) {
            if (format == "csv") cfg.format = pmech::RunConfig::Format::Csv;
            else if (format == "json") cfg.format = pmech::RunConfig::Format::Json;
            else if (format == "both") cfg.format = pmech::RunConfig::Format::Both;
            else {
                std::cerr << "format must be csv|json|both\n";
                return 2;
            }
        }
        if (!suite.empty()) cfg.suite = suite;
        if (!seed_str.empty()) cfg.seed = std::stoull(seed_str);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        return pmech::run_command(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
