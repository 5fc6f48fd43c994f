#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scenarios.hpp"

using namespace qom;
using namespace qom::tools;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("qom_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path write_text(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream out(p);
    out << text;
    return p;
}

} // namespace

TEST_CASE("config validation: empty file reports the missing required field") {
    const fs::path dir = fresh_dir("cfg_empty");
    const fs::path cfg = write_text(dir, "empty.json", "");
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    try {
        validate_config(cfg);
    } catch (const ConfigError& e) {
        bool names_scenario = false;
        for (const auto& d : e.details)
            if (d.find("scenario") != std::string::npos) names_scenario = true;
        CHECK(names_scenario);
    }
}

TEST_CASE("config validation: unknown scenario and unknown parameters are rejected") {
    CHECK_THROWS_AS(parse_config(R"({"scenario": "fig9"})"), ConfigError);
    try {
        parse_config(R"({"scenario": "fig9"})");
    } catch (const ConfigError& e) {
        CHECK(e.details.size() == 1);
        CHECK(e.details[0].find("fig9") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(R"({"scenario": "fig1", "params": {"gg": 1.0}})"), ConfigError);
}

TEST_CASE("config validation: the full violation list is reported at once") {
    try {
        parse_config(R"({
            "scenario": "fig5",
            "formats": ["xml"],
            "threads": 0,
            "params": {"kappa_e": 2.0, "drive": -1.0}
        })");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.details.size() >= 4);
        bool has_kappa = false, has_format = false, has_threads = false, has_drive = false;
        for (const auto& d : e.details) {
            if (d.find("kappa_e") != std::string::npos) has_kappa = true;
            if (d.find("xml") != std::string::npos) has_format = true;
            if (d.find("threads") != std::string::npos) has_threads = true;
            if (d.find("drive") != std::string::npos) has_drive = true;
        }
        CHECK(has_kappa);
        CHECK(has_format);
        CHECK(has_threads);
        CHECK(has_drive);
    }
}

TEST_CASE("config validation: fig3 defaults echo the figure parameters") {
    const RunConfig config = parse_config(R"({"scenario": "fig3"})");
    const auto defaults = scenario_defaults(config.scenario);
    CHECK(defaults.at("photon_n") == 100.0);
    CHECK(defaults.at("g") == 0.01);
    CHECK(defaults.at("photon_cutoff") == 130.0);
    CHECK(defaults.at("phonon_cutoff") == 60.0);
}

TEST_CASE("config parse errors carry line context") {
    try {
        parse_config("{\n  \"scenario\": \"fig1\",\n  broken\n}");
        CHECK(false);
    } catch (const ConfigError& e) {
        REQUIRE(e.details.size() == 1);
        CHECK(e.details[0].find("line 3") != std::string::npos);
    }
}

TEST_CASE("custom scenario with g = 0 matches the free-oscillator analytics") {
    const fs::path dir = fresh_dir("custom_free");
    RunConfig config = parse_config(
        R"({"scenario": "custom", "params": {"g": 0.0, "alpha": 2.0, "beta": 1.0,
            "t_max": 20.0, "dt": 0.5}})");
    config.out_dir = dir;
    run_scenario(config);

    const std::string csv = slurp(dir / "custom_displacement.csv");
    std::istringstream lines(csv);
    std::string line;
    bool header_seen = false;
    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            CHECK(line == "t,x_exact,x_envelope");
            header_seen = true;
            continue;
        }
        std::istringstream fields(line);
        std::string t_s, x_s, e_s;
        std::getline(fields, t_s, ',');
        std::getline(fields, x_s, ',');
        std::getline(fields, e_s, ',');
        const double t = std::stod(t_s);
        const double x = std::stod(x_s);
        const double env = std::stod(e_s);
        CHECK(std::abs(x - 2.0 * std::cos(t)) < 1e-12);
        CHECK(std::abs(env - 2.0 * std::cos(t)) < 1e-12);
        ++rows;
    }
    CHECK(rows == 41);
}

TEST_CASE("fig1 scenario writes the expected files deterministically") {
    const fs::path dir_a = fresh_dir("fig1_a");
    const fs::path dir_b = fresh_dir("fig1_b");
    RunConfig config = parse_config(
        R"({"scenario": "fig1", "formats": ["csv", "json"],
            "params": {"window_revivals": 0.1, "dt": 0.5}})");
    config.out_dir = dir_a;
    const RunResult ra = run_scenario(config);
    CHECK(ra.files.size() == 2);

    config.out_dir = dir_b;
    run_scenario(config);
    CHECK(slurp(dir_a / "fig1_displacement.csv") == slurp(dir_b / "fig1_displacement.csv"));
    CHECK(slurp(dir_a / "fig1_displacement.json") == slurp(dir_b / "fig1_displacement.json"));

    const std::string csv = slurp(dir_a / "fig1_displacement.csv");
    CHECK(csv.find("# version: qom-") != std::string::npos);
    CHECK(csv.find("# units:") != std::string::npos);
}

TEST_CASE("zpe scenario consumes an embedded multimode config") {
    const fs::path dir = fresh_dir("zpe");
    RunConfig config = parse_config(R"({
        "scenario": "zpe-report",
        "zpe": {
            "mech_freq": 1000.0,
            "mech_linewidth": 1e-6,
            "modes": [{"index": 0, "coupling": 5e-6, "parity": "even"}]
        }
    })");
    config.out_dir = dir;
    run_scenario(config);
    const std::string js = slurp(dir / "zpe_report.json");
    CHECK(js.find("\"feasible\": true") != std::string::npos);
    CHECK(js.find("\"ratio\": 10.0") != std::string::npos);
}

TEST_CASE("thermometry scenario: noiseless fit report recovers the true occupancy") {
    const fs::path dir = fresh_dir("thermo");
    RunConfig config = parse_config(
        R"({"scenario": "thermometry", "seed": 11,
            "params": {"nbar_true": 20.0, "noise_level": 0.0}})");
    config.out_dir = dir;
    run_scenario(config);
    const std::string js = slurp(dir / "thermometry_fit.json");
    CHECK(js.find("\"converged\": true") != std::string::npos);
    const std::size_t pos = js.find("\"nbar\":");
    REQUIRE(pos != std::string::npos);
    const double nbar = std::stod(js.substr(pos + 7));
    CHECK(std::abs(nbar - 20.0) / 20.0 < 0.005);
}

TEST_CASE("invalid parameters fail before any computation with no files left behind") {
    const fs::path dir = fresh_dir("badrun");
    RunConfig config;
    config.scenario = Scenario::Fig5;
    config.out_dir = dir;
    config.params["kappa_e"] = 3.0;  // kappa_e > kappa
    CHECK_THROWS_AS(run_scenario(config), ConfigError);
    CHECK(fs::is_empty(dir));
}

TEST_CASE("scenario name table is total") {
    for (const auto& [name, sc] : scenario_names()) CHECK(scenario_name(sc) == name);
}
