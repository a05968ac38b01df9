#include "pmech/config.hpp"

#include <fstream>
#include <sstream>

namespace pmech {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line, int col) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ConfigError(line, col, "expected a number, got '" + v + "'");
    }
}

int parse_int(const std::string& v, int line, int col) {
    try {
        std::size_t used = 0;
        int d = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ConfigError(line, col, "expected an integer, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& v, int line, int col) {
    try {
        std::size_t used = 0;
        std::uint64_t d = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ConfigError(line, col, "expected an unsigned integer, got '" + v + "'");
    }
}

GridSpec parse_grid(const std::string& v, int line, int col) {
    GridSpec g;
    std::istringstream is(v);
    std::string a, b, c;
    if (!std::getline(is, a, ',') || !std::getline(is, b, ',') || !std::getline(is, c, ','))
        throw ConfigError(line, col, "grid value must be 'min,max,count'");
    g.min = parse_double(trim(a), line, col);
    g.max = parse_double(trim(b), line, col);
    g.count = parse_int(trim(c), line, col);
    if (g.count < 1) throw ConfigError(line, col, "grid count must be >= 1");
    return g;
}

}  // namespace

const char* command_name(RunConfig::Command c) {
    switch (c) {
        case RunConfig::Command::Verify:
            return "verify";
        case RunConfig::Command::Oscillator:
            return "oscillator";
        case RunConfig::Command::ClassicalLimit:
            return "classical-limit";
        case RunConfig::Command::Cantrans:
            return "cantrans";
        case RunConfig::Command::Kepler:
            return "kepler";
    }
    return "?";
}

RunConfig::Command command_from_name(const std::string& name) {
    if (name == "verify") return RunConfig::Command::Verify;
    if (name == "oscillator") return RunConfig::Command::Oscillator;
    if (name == "classical-limit" || name == "classical_limit") return RunConfig::Command::ClassicalLimit;
    if (name == "cantrans") return RunConfig::Command::Cantrans;
    if (name == "kepler") return RunConfig::Command::Kepler;
    throw std::invalid_argument("unknown command '" + name + "'");
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream lines(text);
    std::string raw;
    int line_no = 0;
    std::string section = "run";
    while (std::getline(lines, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_no, 1, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "run" && section != "tolerances" && section != "grids" &&
                section != "oscillator" && section != "classical_limit" && section != "cantrans" &&
                section != "kepler")
                throw ConfigError(line_no, 1, "unknown section [" + section + "]");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line_no, 1, "expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        int col = static_cast<int>(raw.find(key)) + 1;
        if (key.empty()) throw ConfigError(line_no, 1, "empty key");

        if (section == "tolerances") {
            double t = parse_double(val, line_no, col);
            if (!(t > 0.0)) throw ConfigError(line_no, col, "tolerances must be positive");
            cfg.tolerances[key] = t;
            continue;
        }
        if (section == "grids") {
            cfg.grids[key] = parse_grid(val, line_no, col);
            continue;
        }
        if (section == "run") {
            if (key == "command") {
                try {
                    cfg.command = command_from_name(val);
                    cfg.command_set = true;
                } catch (const std::exception& e) {
                    throw ConfigError(line_no, col, e.what());
                }
            } else if (key == "h") {
                cfg.h = parse_double(val, line_no, col);
            } else if (key == "n") {
                cfg.n = parse_int(val, line_no, col);
            } else if (key == "seed") {
                cfg.seed = parse_u64(val, line_no, col);
            } else if (key == "out" || key == "output_dir") {
                cfg.output_dir = val;
            } else if (key == "format") {
                if (val == "csv")
                    cfg.format = RunConfig::Format::Csv;
                else if (val == "json")
                    cfg.format = RunConfig::Format::Json;
                else if (val == "both")
                    cfg.format = RunConfig::Format::Both;
                else
                    throw ConfigError(line_no, col, "format must be csv|json|both");
            } else if (key == "suite") {
                cfg.suite = val;
            } else {
                throw ConfigError(line_no, col, "unknown key '" + key + "' in [run]");
            }
            continue;
        }
        if (section == "oscillator") {
            if (key == "mass")
                cfg.osc_mass = parse_double(val, line_no, col);
            else if (key == "omega")
                cfg.osc_omega = parse_double(val, line_no, col);
            else if (key == "force")
                cfg.osc_force = val;
            else if (key == "Z0")
                cfg.osc_Z0 = parse_double(val, line_no, col);
            else if (key == "Omega")
                cfg.osc_Omega = parse_double(val, line_no, col);
            else if (key == "t_max")
                cfg.osc_t_max = parse_double(val, line_no, col);
            else if (key == "steps")
                cfg.osc_steps = parse_int(val, line_no, col);
            else if (key == "label_a")
                cfg.osc_label_a = parse_double(val, line_no, col);
            else if (key == "label_b")
                cfg.osc_label_b = parse_double(val, line_no, col);
            else
                throw ConfigError(line_no, col, "unknown key '" + key + "' in [oscillator]");
            continue;
        }
        if (section == "classical_limit") {
            if (key == "observable")
                cfg.cl_observable = val;
            else if (key == "a")
                cfg.cl_a = parse_double(val, line_no, col);
            else if (key == "b")
                cfg.cl_b = parse_double(val, line_no, col);
            else
                throw ConfigError(line_no, col, "unknown key '" + key + "' in [classical_limit]");
            continue;
        }
        if (section == "cantrans") {
            if (key == "example")
                cfg.ct_example = val;
            else if (key == "t")
                cfg.ct_t = parse_double(val, line_no, col);
            else if (key == "C")
                cfg.ct_C = parse_double(val, line_no, col);
            else if (key == "grid_extent")
                cfg.ct_grid_extent = parse_double(val, line_no, col);
            else if (key == "grid_count")
                cfg.ct_grid_count = parse_int(val, line_no, col);
            else if (key == "f1")
                cfg.ct_f1 = val;
            else if (key == "g1")
                cfg.ct_g1 = val;
            else if (key == "F1")
                cfg.ct_F1 = val;
            else if (key == "G1")
                cfg.ct_G1 = val;
            else
                throw ConfigError(line_no, col, "unknown key '" + key + "' in [cantrans]");
            continue;
        }
        if (section == "kepler") {
            if (key == "nmax")
                cfg.kp_nmax = parse_int(val, line_no, col);
            else if (key == "r_max")
                cfg.kp_rmax = parse_double(val, line_no, col);
            else if (key == "N")
                cfg.kp_N = parse_int(val, line_no, col);
            else if (key == "h2")
                cfg.kp_h2 = parse_double(val, line_no, col);
            else
                throw ConfigError(line_no, col, "unknown key '" + key + "' in [kepler]");
            continue;
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return parse_config_text(os.str());
}

}  // namespace pmech
