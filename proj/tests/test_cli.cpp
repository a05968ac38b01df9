#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pmech/commands.hpp"
#include "pmech/config.hpp"
#include "pmech/observable.hpp"
#include "pmech/report.hpp"
#include "pmech/verify.hpp"

using namespace pmech;

TEST_CASE("config parsing: sections, overrides, rejection of unknown keys") {
    std::string text =
        "# comment\n"
        "[run]\n"
        "command = kepler\n"
        "h = 2.5\n"
        "seed = 99\n"
        "format = both\n"
        "[tolerances]\n"
        "dynamics.ub_qp = 1e-7\n"
        "[grids]\n"
        "h_grid = 1.0, 0.125, 4\n"
        "[kepler]\n"
        "nmax = 2\n";
    RunConfig cfg = parse_config_text(text);
    CHECK(cfg.command == RunConfig::Command::Kepler);
    CHECK(cfg.command_set);
    CHECK(cfg.h == 2.5);
    CHECK(cfg.seed == 99);
    CHECK(cfg.format == RunConfig::Format::Both);
    CHECK(cfg.tolerances.at("dynamics.ub_qp") == 1e-7);
    CHECK(cfg.grids.at("h_grid").count == 4);
    CHECK(cfg.kp_nmax == 2);

    try {
        parse_config_text("[run]\nbogus = 1\n");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(parse_config_text("[nosuch]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[tolerances]\nx = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[run]\nh 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[grids]\ng = 1,2\n"), ConfigError);
}

TEST_CASE("sample config file loads through every section") {
    RunConfig cfg = load_config(std::string(PMECH_TEST_DATA_DIR) + "/sample_config.ini");
    CHECK(cfg.command == RunConfig::Command::ClassicalLimit);
    CHECK(cfg.osc_force == "periodic");
    CHECK(cfg.cl_observable == "q^2+p^2");
    CHECK(cfg.ct_example == "rotshift");
    CHECK(cfg.kp_N == 2000);
    CHECK(cfg.grids.at("h_grid").min == 1.0);
}

TEST_CASE("polynomial parser grammar") {
    PolyQP f = parse_polyqp("q^2 + 2.5*p - 1", 1);
    CHECK(std::abs(f.eval({2.0}, {1.0}) - Cplx{5.5, 0.0}) < 1e-14);
    PolyQP g = parse_polyqp("(q + p)^2 - q p", 1);
    CHECK(std::abs(g.eval({1.0}, {2.0}) - Cplx{7.0, 0.0}) < 1e-14);
    PolyQP two = parse_polyqp("q1*p2 - 0.5", 2);
    CHECK(std::abs(two.eval({3.0, 0.0}, {0.0, 2.0}) - Cplx{5.5, 0.0}) < 1e-14);
    PolyQP caps = parse_polyqp("Q - P", 1);
    CHECK(std::abs(caps.eval({1.0}, {0.25}) - Cplx{0.75, 0.0}) < 1e-14);
    CHECK_THROWS(parse_polyqp("q +", 1));
    CHECK_THROWS(parse_polyqp("q3", 2));
    CHECK_THROWS(parse_polyqp("q ^ p", 1));
}

TEST_CASE("csv writer: quoting and 17-digit round trips") {
    CsvWriter w({"name", "value"});
    w.add_row({"plain", CsvWriter::num(1.0 / 3.0)});
    w.add_row({"with,comma", "x"});
    w.add_row({"with\"quote", "y"});
    std::string s = w.str();
    CHECK(s.find("0.33333333333333331") != std::string::npos);
    CHECK(s.find("\"with,comma\"") != std::string::npos);
    CHECK(s.find("\"with\"\"quote\"") != std::string::npos);
    CHECK_THROWS(w.add_row({"too", "many", "fields"}));
}

TEST_CASE("classical-limit command writes a decreasing error column") {
    RunConfig cfg;
    cfg.command = RunConfig::Command::ClassicalLimit;
    cfg.output_dir = (std::filesystem::temp_directory_path() / "pmech_cli_test").string();
    cfg.format = RunConfig::Format::Both;
    cfg.grids["h_grid"] = GridSpec{1.0, 0.125, 4};
    CHECK(cmd_classical_limit(cfg) == 0);

    std::ifstream is(cfg.output_dir + "/classical_limit.csv");
    REQUIRE(is.good());
    std::string line;
    std::getline(is, line);  // header
    double prev = 1e9;
    int rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto pos = line.find_last_of(',');
        double err = std::stod(line.substr(pos + 1));
        CHECK(err < prev);
        prev = err;
        ++rows;
    }
    CHECK(rows == 4);
}

TEST_CASE("oscillator command: zero force conserves the classical energy") {
    RunConfig cfg;
    cfg.command = RunConfig::Command::Oscillator;
    cfg.output_dir = (std::filesystem::temp_directory_path() / "pmech_cli_test").string();
    cfg.osc_force = "zero";
    cfg.osc_steps = 24;
    cfg.osc_t_max = 6.0;
    CHECK(cmd_oscillator(cfg) == 0);
    std::ifstream is(cfg.output_dir + "/oscillator.csv");
    REQUIRE(is.good());
    std::string line;
    std::getline(is, line);
    double first = -1.0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ls, tok, ',')) vals.push_back(std::stod(tok));
        double energy = vals[1] * vals[1] + vals[2] * vals[2];
        if (first < 0)
            first = energy;
        else
            CHECK(energy == doctest::Approx(first).epsilon(1e-10));
        CHECK(vals[5] * vals[5] + vals[6] * vals[6] == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("csv outputs are byte-identical across repeated runs") {
    RunConfig cfg;
    cfg.command = RunConfig::Command::Cantrans;
    cfg.ct_example = "flip";
    cfg.ct_grid_count = 2;
    auto dir1 = std::filesystem::temp_directory_path() / "pmech_det_1";
    auto dir2 = std::filesystem::temp_directory_path() / "pmech_det_2";
    cfg.output_dir = dir1.string();
    CHECK(cmd_cantrans(cfg) == 0);
    cfg.output_dir = dir2.string();
    CHECK(cmd_cantrans(cfg) == 0);
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream is(p, std::ios::binary);
        std::ostringstream os;
        os << is.rdbuf();
        return os.str();
    };
    std::string a = slurp(dir1 / "cantrans_residuals.csv");
    std::string b = slurp(dir2 / "cantrans_residuals.csv");
    CHECK(!a.empty());
    CHECK(a == b);
}

TEST_CASE("cantrans command: quarter-turn case and custom-relation validation") {
    RunConfig cfg;
    cfg.command = RunConfig::Command::Cantrans;
    cfg.output_dir = (std::filesystem::temp_directory_path() / "pmech_cli_ct").string();
    cfg.ct_example = "rotshift";
    cfg.ct_t = 0.5 * 3.141592653589793238462643;
    cfg.ct_C = 0.0;
    cfg.ct_grid_count = 2;
    CHECK(cmd_cantrans(cfg) == 0);

    // invalid custom relations are rejected before any numerics
    cfg.ct_example = "custom";
    cfg.ct_f1 = "q";
    cfg.ct_g1 = "p";
    cfg.ct_F1 = "Q";
    cfg.ct_G1 = "2P";
    CHECK(cmd_cantrans(cfg) == 2);
    cfg.ct_G1 = "P";
    CHECK(cmd_cantrans(cfg) == 0);
}

TEST_CASE("verify: tolerance override forces a controlled failure") {
    RunConfig cfg;
    cfg.suite = "gauss";
    cfg.output_dir = (std::filesystem::temp_directory_path() / "pmech_cli_verify").string();
    cfg.tolerances["gauss.linearity"] = 1e-300;
    CHECK(cmd_verify(cfg) == 1);

    std::ifstream is(cfg.output_dir + "/report.json");
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    CHECK(os.str().find("\"fail\"") != std::string::npos);
    CHECK(os.str().find("gauss.linearity") != std::string::npos);
}
