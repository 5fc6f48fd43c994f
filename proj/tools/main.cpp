#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "qom/errors.hpp"
#include "scenarios.hpp"

namespace {

int run(const std::string& name, const std::optional<std::string>& config_path,
        const std::optional<std::string>& out_dir, const std::vector<std::string>& formats,
        const std::optional<std::uint64_t>& seed, const std::optional<int>& threads) {
    using namespace qom::tools;
    RunConfig config;
    if (config_path) {
        config = validate_config(*config_path);
        const Scenario requested = scenario_names().at(name);
        if (config.scenario != requested && scenario_name(config.scenario) != name)
            throw qom::ConfigError("invalid configuration",
                                   {"config file scenario \"" + scenario_name(config.scenario) +
                                    "\" does not match subcommand \"" + name + "\""});
    } else {
        config.scenario = scenario_names().at(name);
    }
    const std::filesystem::path out = out_dir ? std::filesystem::path(*out_dir) : config.out_dir;
    apply_overrides(config, &out, formats.empty() ? nullptr : &formats,
                    seed ? &*seed : nullptr, threads ? &*threads : nullptr);

    const RunResult result = run_scenario(config);
    for (const auto& f : result.files) std::cout << "wrote " << f.string() << "\n";
    for (const auto& n : result.notes) std::cout << n << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qom - quadratic optomechanics scenarios"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    std::optional<std::string> out_dir;
    std::vector<std::string> formats;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;

    std::vector<CLI::App*> subs;
    for (const auto& [name, scenario] : qom::tools::scenario_names()) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " scenario");
        sub->add_option("--config", config_path, "JSON config file with parameter overrides");
        sub->add_option("--out", out_dir, "output directory (default: config or cwd)");
        sub->add_option("--format", formats, "output formats: csv, json (repeatable)")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", seed, "random seed (noisy thermometry draws)");
        sub->add_option("--threads", threads, "worker threads (runs are deterministic)");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        return run(name, config_path, out_dir, formats, seed, threads);
    } catch (const qom::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        for (const auto& d : e.details) std::cerr << "  - " << d << "\n";
        return 2;
    } catch (const qom::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
