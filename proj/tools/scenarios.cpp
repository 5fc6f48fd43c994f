#include "scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qom/closed_system.hpp"
#include "qom/driven_cavity.hpp"
#include "qom/phase_space.hpp"
#include "qom/trace_io.hpp"
#include "qom/zpe.hpp"

namespace qom::tools {

namespace {

constexpr const char* kVersion = "qom-0.1.0";

using nlohmann::json;

} // namespace

const std::map<std::string, Scenario>& scenario_names() {
    static const std::map<std::string, Scenario> names = {
        {"fig1", Scenario::Fig1},
        {"fig2", Scenario::Fig2},
        {"fig3", Scenario::Fig3},
        {"fig4", Scenario::Fig4},
        {"fig5", Scenario::Fig5},
        {"fig6", Scenario::Fig6},
        {"zpe-report", Scenario::ZpeReport},
        {"thermometry", Scenario::Thermometry},
        {"custom", Scenario::Custom},
    };
    return names;
}

std::string scenario_name(Scenario s) {
    for (const auto& [name, sc] : scenario_names())
        if (sc == s) return name;
    return "unknown";
}

std::map<std::string, double> scenario_defaults(Scenario s) {
    switch (s) {
        case Scenario::Fig1:
            return {{"alpha", 6.0},    {"beta", 2.0}, {"g", 0.01}, {"mech_freq", 1.0},
                    {"cav_freq", 0.0}, {"window_revivals", 2.5}, {"dt", 0.2}};
        case Scenario::Fig2:
            return {{"alpha", 2.0}, {"squeeze_r", 0.8}, {"nbar_th", 1.0}, {"g", 0.01},
                    {"mech_freq", 1.0}, {"window_revivals", 2.2}, {"dt", 0.2}};
        case Scenario::Fig3:
            return {{"photon_n", 100.0},     {"g", 0.01},           {"mech_freq", 1.0},
                    {"photon_cutoff", 130.0}, {"phonon_cutoff", 60.0}, {"grid_half_width", 6.0},
                    {"grid_points", 201.0}};
        case Scenario::Fig4:
            return {{"mean_photons", 40.0},  {"phonon_n", 2.0},     {"g", 0.01},
                    {"mech_freq", 1.0},      {"photon_cutoff", 80.0}, {"phonon_cutoff", 40.0},
                    {"grid_half_width", 6.0}, {"grid_points", 201.0}};
        case Scenario::Fig5:
            return {{"g_over_kappa", 4.0}, {"mean_phonons", 10.0}, {"kappa", 1.0},
                    {"kappa_e", 1.0},      {"drive", 0.01},        {"step_over_kappa", 0.05}};
        case Scenario::Fig6:
            return {{"nbar", 50.0},  {"g_over_kappa", 0.01}, {"kappa", 1.0},
                    {"kappa_e", 1.0}, {"drive", 0.01},        {"step_over_kappa", 0.005}};
        case Scenario::ZpeReport:
            return {{"mech_freq", 1.0e3}, {"mech_linewidth", 1.0e-6}, {"mode_count", 10.0},
                    {"mode_coupling", 5.0e-6}};
        case Scenario::Thermometry:
            return {{"nbar_true", 50.0}, {"g_over_kappa", 0.01}, {"kappa", 1.0},
                    {"kappa_e", 1.0},    {"drive", 0.01},        {"noise_level", 0.0},
                    {"step_over_kappa", 0.05}};
        case Scenario::Custom:
            return {{"alpha", 2.0}, {"beta", 1.0}, {"g", 0.0}, {"mech_freq", 1.0},
                    {"t_max", 100.0}, {"dt", 0.1}};
    }
    return {};
}

namespace {

void check_params(Scenario scenario, const std::map<std::string, double>& params,
                  std::vector<std::string>& errors) {
    const std::map<std::string, double> defaults = scenario_defaults(scenario);
    for (const auto& [key, value] : params) {
        if (!defaults.count(key)) {
            errors.push_back("unknown parameter \"" + key + "\" for scenario " +
                             scenario_name(scenario));
            continue;
        }
        if (!std::isfinite(value)) {
            errors.push_back("parameter \"" + key + "\" must be finite");
            continue;
        }
        const bool positive_required =
            key == "mech_freq" || key == "kappa" || key == "drive" || key == "dt" ||
            key == "t_max" || key == "step_over_kappa" || key == "grid_half_width" ||
            key == "window_revivals" || key == "mech_linewidth";
        if (positive_required && !(value > 0.0))
            errors.push_back("parameter \"" + key + "\" must be > 0");
        const bool nonneg_required =
            key == "g" || key == "g_over_kappa" || key == "nbar" || key == "nbar_th" ||
            key == "noise_level" || key == "mean_phonons" || key == "mean_photons" ||
            key == "mode_coupling";
        if (nonneg_required && value < 0.0)
            errors.push_back("parameter \"" + key + "\" must be >= 0");
        if ((key == "photon_cutoff" || key == "phonon_cutoff" || key == "grid_points" ||
             key == "photon_n" || key == "phonon_n" || key == "mode_count") &&
            (value < 1.0 || value != std::floor(value)))
            errors.push_back("parameter \"" + key + "\" must be a positive integer");
    }
    // Cross-parameter constraints.
    const auto get = [&](const std::string& key) {
        auto it = params.find(key);
        return it != params.end() ? it->second : defaults.at(key);
    };
    if (defaults.count("kappa") && defaults.count("kappa_e")) {
        const double kappa = get("kappa");
        const double kappa_e = get("kappa_e");
        if (!(kappa_e > 0.0) || kappa_e > kappa)
            errors.push_back("precondition violated: kappa_e must lie in (0, kappa]");
    }
}

RunConfig parse_config_json(const json& j, std::vector<std::string>& errors) {
    RunConfig config;
    if (!j.contains("scenario")) {
        errors.push_back("required field missing: scenario");
        return config;
    }
    const std::string name = j.at("scenario").is_string() ? j.at("scenario").get<std::string>()
                                                          : std::string();
    const auto it = scenario_names().find(name);
    if (it == scenario_names().end()) {
        std::string valid;
        for (const auto& [n, s] : scenario_names()) valid += (valid.empty() ? "" : "|") + n;
        errors.push_back("unknown scenario \"" + name + "\" (valid: " + valid + ")");
        return config;
    }
    config.scenario = it->second;

    if (j.contains("out_dir")) config.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
            errors.push_back("seed must be a non-negative integer");
        else
            config.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("threads")) {
        const int t = j.at("threads").get<int>();
        if (t < 1)
            errors.push_back("threads must be >= 1");
        else
            config.threads = t;
    }
    if (j.contains("formats")) {
        config.formats.clear();
        for (const auto& f : j.at("formats")) {
            const std::string fmt = f.get<std::string>();
            if (fmt != "csv" && fmt != "json")
                errors.push_back("unknown output format \"" + fmt + "\" (valid: csv|json)");
            else
                config.formats.insert(fmt);
        }
        if (config.formats.empty()) errors.push_back("formats list is empty");
    }
    if (j.contains("params")) {
        if (!j.at("params").is_object()) {
            errors.push_back("params must be an object");
        } else {
            for (const auto& [key, value] : j.at("params").items()) {
                if (!value.is_number()) {
                    errors.push_back("parameter \"" + key + "\" must be numeric");
                    continue;
                }
                config.params[key] = value.get<double>();
            }
        }
    }
    check_params(config.scenario, config.params, errors);
    return config;
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    std::vector<std::string> errors;
    json j;
    if (json_text.find_first_not_of(" \t\r\n") == std::string::npos) {
        errors.push_back("config file is empty");
        errors.push_back("required field missing: scenario");
        throw ConfigError("invalid configuration", errors);
    }
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < std::min(e.byte, json_text.size()); ++i)
            if (json_text[i] == '\n') ++line;
        std::ostringstream os;
        os << "JSON parse error at line " << line << ": " << e.what();
        throw ConfigError("invalid configuration", {os.str()});
    }
    RunConfig config = parse_config_json(j, errors);
    if (!errors.empty()) throw ConfigError("invalid configuration", errors);
    config.raw_json = json_text;
    return config;
}

RunConfig validate_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void apply_overrides(RunConfig& config, const std::filesystem::path* out_dir,
                     const std::vector<std::string>* formats, const std::uint64_t* seed,
                     const int* threads) {
    if (out_dir) config.out_dir = *out_dir;
    if (formats && !formats->empty()) {
        config.formats.clear();
        for (const std::string& f : *formats) {
            if (f != "csv" && f != "json")
                throw ConfigError("invalid configuration", {"unknown output format \"" + f + "\""});
            config.formats.insert(f);
        }
    }
    if (seed) config.seed = *seed;
    if (threads) {
        if (*threads < 1) throw ConfigError("invalid configuration", {"threads must be >= 1"});
        config.threads = *threads;
    }
}

namespace {

// Tracks files written by one run so failures can clean up after themselves.
class OutputSet {
public:
    explicit OutputSet(const std::filesystem::path& dir) : dir_(dir) {
        std::filesystem::create_directories(dir_);
    }

    template <typename Fn>
    std::filesystem::path write(const std::string& name, Fn&& fn) {
        const std::filesystem::path path = dir_ / name;
        const std::filesystem::path tmp = dir_ / (name + ".tmp");
        {
            std::ofstream os(tmp, std::ios::binary);
            if (!os) throw Error("cannot write to " + tmp.string());
            fn(os);
            if (!os) throw Error("write failed for " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
        written_.push_back(path);
        return path;
    }

    void discard_all() {
        for (const auto& p : written_) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
        written_.clear();
    }

    const std::vector<std::filesystem::path>& files() const { return written_; }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
};

struct ParamSet {
    std::map<std::string, double> values;

    double get(const std::string& key) const { return values.at(key); }
    long geti(const std::string& key) const { return static_cast<long>(values.at(key)); }
};

ParamSet resolve_params(const RunConfig& config) {
    ParamSet p;
    p.values = scenario_defaults(config.scenario);
    for (const auto& [key, value] : config.params) p.values[key] = value;
    return p;
}

Metadata base_metadata(const RunConfig& config, const ParamSet& params) {
    Metadata meta;
    meta["version"] = kVersion;
    meta["scenario"] = scenario_name(config.scenario);
    meta["seed"] = std::to_string(config.seed);
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, value] : params.values) {
        if (!first) os << ' ';
        os << key << '=' << format_float(value);
        first = false;
    }
    meta["params"] = os.str();
    return meta;
}

std::vector<double> time_grid(double t_max, double dt) {
    std::vector<double> ts;
    const long count = static_cast<long>(std::floor(t_max / dt)) + 1;
    ts.reserve(count);
    for (long i = 0; i < count; ++i) ts.push_back(static_cast<double>(i) * dt);
    return ts;
}

void write_table(OutputSet& out, const RunConfig& config, const std::string& stem,
                 const std::vector<std::string>& names,
                 const std::vector<const std::vector<double>*>& columns, const Metadata& meta) {
    if (config.formats.count("csv")) {
        out.write(stem + ".csv",
                  [&](std::ostream& os) { write_columns_csv(os, names, columns, meta); });
    }
    if (config.formats.count("json")) {
        out.write(stem + ".json", [&](std::ostream& os) {
            json j;
            json jm = json::object();
            for (const auto& [k, v] : meta) jm[k] = v;
            j["meta"] = jm;
            for (std::size_t i = 0; i < names.size(); ++i) j[names[i]] = *columns[i];
            os << j.dump(2) << '\n';
        });
    }
}

void run_fig1(const RunConfig& config, const ParamSet& p, OutputSet& out) {
    SystemParams params;
    params.mech_freq = p.get("mech_freq");
    params.cav_freq = p.get("cav_freq");
    params.coupling = p.get("g");
    params.photon_cutoff = 2;
    params.phonon_cutoff = 2;
    const Complex alpha(p.get("alpha"), 0.0);
    const Complex beta(p.get("beta"), 0.0);
    const RevivalTimes rev = revival_times(params, alpha);
    const std::vector<double> ts = time_grid(p.get("window_revivals") * rev.revival, p.get("dt"));
    const std::vector<double> exact = mean_displacement_exact(params, alpha, beta, ts);
    const std::vector<double> envelope = mean_displacement_envelope(params, alpha, beta, ts);

    Metadata meta = base_metadata(config, p);
    meta["units"] = "time in 1/mech_freq; displacement dimensionless (x = b + b†)";
    meta["revival_time"] = format_float(rev.revival);
    meta["collapse_time"] = format_float(rev.collapse);
    write_table(out, config, "fig1_displacement", {"t", "x_exact", "x_envelope"},
                {&ts, &exact, &envelope}, meta);
}

void run_fig2(const RunConfig& config, const ParamSet& p, OutputSet& out) {
    SystemParams params;
    params.mech_freq = p.get("mech_freq");
    params.coupling = p.get("g");
    params.photon_cutoff = 2;
    params.phonon_cutoff = 2;
    const Complex alpha(p.get("alpha"), 0.0);
    const double nbar = p.get("nbar_th");
    const RevivalTimes rev = revival_times(params, alpha);
    const std::vector<double> ts = time_grid(p.get("window_revivals") * rev.revival, p.get("dt"));

    const VarianceTrace coherent =
        displacement_variance(params, StateSpec::coherent(alpha), nbar, ts);
    const VarianceTrace squeezed = displacement_variance(
        params, StateSpec::squeezed_vacuum(p.get("squeeze_r")), nbar, ts);

    Metadata meta = base_metadata(config, p);
    meta["units"] = "time in 1/mech_freq; variance dimensionless (<x^2>, x = b + b†)";
    write_table(out, config, "fig2_variance",
                {"t", "var_exact_coherent", "var_printed_coherent", "var_exact_squeezed"},
                {&ts, &coherent.exact, &coherent.printed_form, &squeezed.exact}, meta);
}

void write_snapshots(const RunConfig& config, const ParamSet& p, OutputSet& out,
                     const std::string& stem, const StateSpec& photon_spec,
                     const StateSpec& phonon_spec, const std::vector<double>& times_eff) {
    SystemParams params;
    params.mech_freq = p.get("mech_freq");
    params.coupling = p.get("g");
    params.photon_cutoff = p.geti("photon_cutoff");
    params.phonon_cutoff = p.geti("phonon_cutoff");

    SnapshotOptions opts;
    opts.grid = QGridSpec::centered(p.get("grid_half_width"), p.geti("grid_points"));
    const std::vector<Snapshot> snaps =
        snapshot_series(params, photon_spec, phonon_spec, times_eff, opts);

    json summary;
    summary["version"] = kVersion;
    summary["scenario"] = scenario_name(config.scenario);
    summary["effective_period"] =
        effective_period(params, photon_spec.mean_occupation());
    json entries = json::array();
    Eigen::VectorXd marginal0;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const Snapshot& s = snaps[i];
        if (i == 0) marginal0 = s.photon_marginal;
        std::ostringstream name;
        name << stem << "_q_" << (i + 1);
        Metadata meta = base_metadata(config, p);
        meta["time_effective_periods"] = format_float(s.time_effective);
        meta["time"] = format_float(s.time);
        meta["units"] = "alpha-plane coordinates dimensionless";
        if (config.formats.count("csv"))
            out.write(name.str() + ".csv",
                      [&](std::ostream& os) { write_qgrid_csv(os, s.grid, meta); });
        if (config.formats.count("json"))
            out.write(name.str() + ".json",
                      [&](std::ostream& os) { write_qgrid_json(os, s.grid, meta); });

        const SliceStructure slice = real_axis_structure(s.grid);
        json e;
        e["time_effective_periods"] = s.time_effective;
        e["time"] = s.time;
        e["var_x"] = s.var_x;
        e["var_p"] = s.var_p;
        e["phonon_purity"] = s.phonon_purity;
        e["q_mass_in_window"] = s.grid.normalization;
        e["slice_maxima"] = slice.maxima_count;
        e["slice_maxima_positions"] = slice.maxima_positions;
        e["slice_dip_ratio"] = slice.dip_ratio;
        e["photon_marginal_drift"] =
            (s.photon_marginal - marginal0).cwiseAbs().maxCoeff();
        entries.push_back(e);
    }
    summary["snapshots"] = entries;
    out.write(stem + "_summary.json",
              [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
}

void run_fig3(const RunConfig& config, const ParamSet& p, OutputSet& out) {
    write_snapshots(config, p, out, "fig3", StateSpec::fock(p.geti("photon_n")),
                    StateSpec::fock(0), {0.25, 0.5, 0.75, 1.0});
}

void run_fig4(const RunConfig& config, const ParamSet& p, OutputSet& out) {
    write_snapshots(config, p, out, "fig4",
                    StateSpec::coherent(std::sqrt(p.get("mean_photons"))),
                    StateSpec::fock(p.geti("phonon_n")), {0.0, 1.5, 130.0, 260.0, 260.25, 261.0});
}

DriveParams drive_from(const ParamSet& p) {
    DriveParams drive;
    drive.detuning = 0.0;
    drive.drive = p.get("drive");
    drive.linewidth = p.get("kappa");
    drive.output_coupling = p.get("kappa_e");
    drive.validate();
    return drive;
}

void run_fig5(const RunConfig& config, const ParamSet& p, OutputSet& out) {
    const DriveParams drive = drive_from(p);
    const double g = p.get("g_over_kappa") * drive.linewidth;
    const PhononDistribution dist = PhononDistribution::coherent(p.get("mean_phonons"));
    const std::vector<double> grid = default_detuning_grid(
        drive, g, dist, p.get("step_over_kappa") * drive.linewidth);
    const TransmissionTrace trace = transmission(dist, drive, g, grid);

    Metadata meta = base_metadata(config, p);
    meta["units"] = "detuning in units of kappa; transmission dimensionless |t|^2";
    if (config.formats.count("csv"))
        out.write("fig5_transmission.csv",
                  [&](std::ostream& os) { write_trace_csv(os, trace, drive.linewidth, meta); });
    if (config.formats.count("json"))
        out.write("fig5_transmission.json",
                  [&](std::ostream& os) { write_trace_json(os, trace, drive.linewidth, meta); });

    const PhononDistribution extracted = extract_statistics(trace, drive, g);
    double tv = 0.0;
    const std::size_t count =
        std::max(extracted.probabilities.size(), dist.probabilities.size());
    for (std::size_t n = 0; n < count; ++n) {
        const double a = n < extracted.probabilities.size() ? extracted.probabilities[n] : 0.0;
        const double b = n < dist.probabilities.size() ? dist.probabilities[n] : 0.0;
        tv += std::abs(a - b);
    }
    tv *= 0.5;
    json j;
    j["version"] = kVersion;
    j["extracted_probabilities"] = extracted.probabilities;
    j["generating_probabilities"] = dist.probabilities;
    j["total_variation_distance"] = tv;
    out.write("fig5_extracted.json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

void run_fig6(const RunConfig& config, const ParamSet& p, OutputSet& out) {
    const DriveParams drive = drive_from(p);
    const double g = p.get("g_over_kappa") * drive.linewidth;
    const double nbar = p.get("nbar");
    const PhononDistribution thermal = PhononDistribution::thermal(nbar);
    const PhononDistribution coherent = PhononDistribution::coherent(nbar);
    const std::vector<double> grid = default_detuning_grid(
        drive, g, thermal, p.get("step_over_kappa") * drive.linewidth);

    const TransmissionTrace thermal_trace = transmission(thermal, drive, g, grid);
    ClosedFormReport closed_report;
    const TransmissionTrace closed =
        thermal_transmission_closed_form(nbar, drive, g, grid, &closed_report);
    const TransmissionTrace coherent_trace = transmission(coherent, drive, g, grid);

    std::vector<double> over_kappa(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) over_kappa[i] = grid[i] / drive.linewidth;

    Metadata meta = base_metadata(config, p);
    meta["units"] = "detuning in units of kappa; transmission dimensionless |t|^2";
    meta["closed_form_method"] = closed_report.method;
    write_table(out, config, "fig6_transmission",
                {"detuning_over_kappa", "thermal", "thermal_closed_form", "coherent"},
                {&over_kappa, &thermal_trace.transmission, &closed.transmission,
                 &coherent_trace.transmission},
                meta);

    json j;
    j["version"] = kVersion;
    j["thermal_skewness"] = trace_skewness(thermal_trace);
    j["coherent_skewness"] = trace_skewness(coherent_trace);
    j["thermal_mirror_asymmetry"] = mirror_asymmetry(thermal_trace);
    j["coherent_mirror_asymmetry"] = mirror_asymmetry(coherent_trace);
    j["thermal_area"] = lineshape_area(thermal_trace).area;
    j["coherent_area"] = lineshape_area(coherent_trace).area;
    j["closed_form_method"] = closed_report.method;
    out.write("fig6_summary.json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

void run_zpe(const RunConfig& config, const ParamSet& p, OutputSet& out) {
    ZpeScenario scenario;
    bool from_config = false;
    if (!config.raw_json.empty()) {
        const json j = json::parse(config.raw_json);
        if (j.contains("zpe")) {
            scenario = parse_multimode_config(j.at("zpe").dump());
            from_config = true;
        }
    }
    if (!from_config) {
        scenario.mech_freq = p.get("mech_freq");
        scenario.config.mech_linewidth = p.get("mech_linewidth");
        const long count = p.geti("mode_count");
        for (long i = 0; i < count; ++i)
            scenario.config.modes.push_back(
                {static_cast<int>(i), p.get("mode_coupling"), ModeParity::Even, 0});
    }
    const FeasibilityReport report = feasibility_report(scenario.mech_freq, scenario.config);
    out.write("zpe_report.json",
              [&](std::ostream& os) { os << feasibility_report_json(report) << '\n'; });
    out.write("zpe_report.txt",
              [&](std::ostream& os) { os << feasibility_report_text(report); });
}

void run_thermometry(const RunConfig& config, const ParamSet& p, OutputSet& out) {
    const DriveParams drive = drive_from(p);
    const double g = p.get("g_over_kappa") * drive.linewidth;
    const double nbar_true = p.get("nbar_true");
    const double noise = p.get("noise_level");
    const PhononDistribution dist = PhononDistribution::thermal(nbar_true);
    const std::vector<double> grid = default_detuning_grid(
        drive, g, dist, p.get("step_over_kappa") * drive.linewidth);
    TransmissionTrace trace = thermal_transmission_closed_form(nbar_true, drive, g, grid);

    if (noise > 0.0) {
        std::mt19937_64 rng(config.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (double& v : trace.transmission) v = std::max(0.0, v * (1.0 + noise * gauss(rng)));
    }

    const TemperatureFit fit = fit_temperature(trace, drive, g);

    Metadata meta = base_metadata(config, p);
    meta["units"] = "detuning in units of kappa; transmission dimensionless |t|^2";
    if (config.formats.count("csv"))
        out.write("thermometry_trace.csv",
                  [&](std::ostream& os) { write_trace_csv(os, trace, drive.linewidth, meta); });
    if (config.formats.count("json"))
        out.write("thermometry_trace.json",
                  [&](std::ostream& os) { write_trace_json(os, trace, drive.linewidth, meta); });
    meta["nbar_true"] = format_float(nbar_true);
    out.write("thermometry_fit.json",
              [&](std::ostream& os) { os << temperature_fit_json(fit, meta) << '\n'; });
}

void run_custom(const RunConfig& config, const ParamSet& p, OutputSet& out) {
    std::string operation = "displacement";
    if (!config.raw_json.empty()) {
        const json j = json::parse(config.raw_json);
        if (j.contains("operation")) operation = j.at("operation").get<std::string>();
    }
    SystemParams params;
    params.mech_freq = p.get("mech_freq");
    params.coupling = p.get("g");
    params.photon_cutoff = 2;
    params.phonon_cutoff = 2;
    const Complex alpha(p.get("alpha"), 0.0);
    const Complex beta(p.get("beta"), 0.0);
    const std::vector<double> ts = time_grid(p.get("t_max"), p.get("dt"));

    Metadata meta = base_metadata(config, p);
    meta["units"] = "time in 1/mech_freq";
    if (operation == "displacement") {
        const std::vector<double> exact = mean_displacement_exact(params, alpha, beta, ts);
        const std::vector<double> envelope = mean_displacement_envelope(params, alpha, beta, ts);
        write_table(out, config, "custom_displacement", {"t", "x_exact", "x_envelope"},
                    {&ts, &exact, &envelope}, meta);
    } else if (operation == "variance") {
        const double nbar = p.values.count("nbar_th") ? p.values.at("nbar_th") : 0.0;
        const VarianceTrace var =
            displacement_variance(params, StateSpec::coherent(alpha), nbar, ts);
        write_table(out, config, "custom_variance", {"t", "var_exact", "var_printed"},
                    {&ts, &var.exact, &var.printed_form}, meta);
    } else {
        throw ConfigError("invalid configuration",
                          {"unknown custom operation \"" + operation +
                           "\" (valid: displacement|variance)"});
    }
}

} // namespace

RunResult run_scenario(const RunConfig& config) {
    const ParamSet p = resolve_params(config);
    std::vector<std::string> errors;
    check_params(config.scenario, config.params, errors);
    if (!errors.empty()) throw ConfigError("invalid configuration", errors);

    OutputSet out(config.out_dir);
    try {
        switch (config.scenario) {
            case Scenario::Fig1: run_fig1(config, p, out); break;
            case Scenario::Fig2: run_fig2(config, p, out); break;
            case Scenario::Fig3: run_fig3(config, p, out); break;
            case Scenario::Fig4: run_fig4(config, p, out); break;
            case Scenario::Fig5: run_fig5(config, p, out); break;
            case Scenario::Fig6: run_fig6(config, p, out); break;
            case Scenario::ZpeReport: run_zpe(config, p, out); break;
            case Scenario::Thermometry: run_thermometry(config, p, out); break;
            case Scenario::Custom: run_custom(config, p, out); break;
        }
    } catch (...) {
        out.discard_all();
        throw;
    }

    RunResult result;
    result.files = out.files();
    return result;
}

} // namespace qom::tools
