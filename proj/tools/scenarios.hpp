#ifndef QOM_TOOLS_SCENARIOS_HPP
#define QOM_TOOLS_SCENARIOS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qom/errors.hpp"

namespace qom::tools {

/// Batch scenarios. fig1..fig6 reproduce the figure datasets with the caption
/// parameters as defaults; zpe-report and thermometry are config-driven; the
/// custom scenario exposes the closed-system and driven-cavity operations with
/// free parameters.
enum class Scenario {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    ZpeReport,
    Thermometry,
    Custom,
};

const std::map<std::string, Scenario>& scenario_names();
std::string scenario_name(Scenario s);

struct RunConfig {
    Scenario scenario = Scenario::Fig1;
    std::filesystem::path out_dir = ".";
    std::set<std::string> formats = {"csv"};
    std::uint64_t seed = 0;
    int threads = 1;
    /// Scenario-specific numeric overrides (defaults come from the figure
    /// captions) plus occasional string/list parameters kept as raw JSON text.
    std::map<std::string, double> params;
    std::string raw_json;
};

/// Parses and validates a config file, echoing all resolved defaults. On
/// failure the ConfigError carries the full list of violations.
RunConfig validate_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& json_text);

/// Applies CLI-level overrides on top of a parsed config.
void apply_overrides(RunConfig& config, const std::filesystem::path* out_dir,
                     const std::vector<std::string>* formats, const std::uint64_t* seed,
                     const int* threads);

struct RunResult {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> notes;
};

/// Runs the scenario and writes its data files. Outputs are deterministic for
/// a fixed config and seed; partially written files are removed on failure.
RunResult run_scenario(const RunConfig& config);

/// Resolved defaults for a scenario (used by validate_config echoing).
std::map<std::string, double> scenario_defaults(Scenario s);

} // namespace qom::tools

#endif // QOM_TOOLS_SCENARIOS_HPP
