#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace pmech {

struct ConfigError : std::runtime_error {
    ConfigError(int line_, int col_, const std::string& what_)
        : std::runtime_error("config:" + std::to_string(line_) + ":" + std::to_string(col_) + ": " + what_),
          line(line_),
          col(col_) {}
    int line, col;
};

struct GridSpec {
    double min = 0.0, max = 1.0;
    int count = 1;
};

// Flat key=value configuration with [section] headers. Unknown keys are
// rejected with a line/column diagnostic; [tolerances] and [grids] accept
// arbitrary names.
struct RunConfig {
    enum class Command { Verify, Oscillator, ClassicalLimit, Cantrans, Kepler };
    enum class Format { Csv, Json, Both };

    Command command = Command::Verify;
    bool command_set = false;
    double h = 1.0;
    int n = 1;
    std::uint64_t seed = 42;
    std::string output_dir;
    Format format = Format::Csv;
    std::string suite;  // empty = all

    std::map<std::string, double> tolerances;
    std::map<std::string, GridSpec> grids;

    // [oscillator]
    double osc_mass = 1.0, osc_omega = 1.0;
    std::string osc_force = "zero";  // zero | periodic
    double osc_Z0 = 1.0, osc_Omega = 2.0;
    double osc_t_max = 10.0;
    int osc_steps = 100;
    double osc_label_a = 1.0, osc_label_b = 0.0;

    // [classical_limit]
    std::string cl_observable = "q^2+p^2";
    double cl_a = 1.0, cl_b = 2.0;

    // [cantrans]
    std::string ct_example = "rotshift";  // flip | rotshift | custom
    double ct_t = 1.5707963267948966;
    double ct_C = 0.0;
    double ct_grid_extent = 1.0;
    int ct_grid_count = 3;
    std::string ct_f1, ct_g1, ct_F1, ct_G1;  // custom relations

    // [kepler]
    int kp_nmax = 3;
    double kp_rmax = 60.0;
    int kp_N = 2000;
    double kp_h2 = 3.8;  // second Planck value for the ratio law
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

const char* command_name(RunConfig::Command c);
RunConfig::Command command_from_name(const std::string& name);

}  // namespace pmech
