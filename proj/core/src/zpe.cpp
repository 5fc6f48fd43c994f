#include "qom/zpe.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qom {

namespace {

double coupling_sum_all(const MultimodeConfig& config) {
    double s = 0.0;
    for (const OpticalMode& m : config.modes) {
        if (m.coupling < 0.0 || !std::isfinite(m.coupling))
            throw NumericDomainError("mode couplings must be >= 0 and finite");
        if (m.occupancy < 0) throw NumericDomainError("mode occupancies must be >= 0");
        s += m.coupling * (static_cast<double>(m.occupancy) + 0.5);
    }
    return s;
}

double coupling_sum_even(const MultimodeConfig& config) {
    double s = 0.0;
    for (const OpticalMode& m : config.modes)
        if (m.parity == ModeParity::Even) s += m.coupling;
    return s;
}

double residual_sum(const MultimodeConfig& config) {
    double s = 0.0;
    for (double g : config.end_residual_couplings) {
        if (g < 0.0 || !std::isfinite(g))
            throw NumericDomainError("residual couplings must be >= 0 and finite");
        s += g;
    }
    return s;
}

double dressed(double omega, double weighted_coupling_sum) {
    const double radicand = omega * omega + 4.0 * omega * weighted_coupling_sum;
    if (radicand <= 0.0)
        throw UnphysicalCouplingError("dressed-frequency radicand is non-positive");
    return std::sqrt(radicand);
}

} // namespace

double dressed_mech_freq_multimode(double mech_freq, const MultimodeConfig& config) {
    if (!(mech_freq > 0.0) || !std::isfinite(mech_freq))
        throw NumericDomainError("mech_freq must be positive");
    return dressed(mech_freq, coupling_sum_all(config));
}

FrequencyDifference zpe_frequency_difference(double mech_freq, const MultimodeConfig& config) {
    if (!(mech_freq > 0.0) || !std::isfinite(mech_freq))
        throw NumericDomainError("mech_freq must be positive");
    const double s_even = coupling_sum_even(config);
    const double s_res = residual_sum(config);
    FrequencyDifference d;
    d.first_order = 2.0 * (s_even - s_res);
    d.exact = dressed(mech_freq, s_even) - dressed(mech_freq, s_res);
    return d;
}

FeasibilityReport feasibility_report(double mech_freq, const MultimodeConfig& config) {
    if (!(config.mech_linewidth > 0.0) || !std::isfinite(config.mech_linewidth))
        throw NumericDomainError("mech_linewidth must be positive");
    const FrequencyDifference d = zpe_frequency_difference(mech_freq, config);
    FeasibilityReport r;
    r.mech_freq = mech_freq;
    r.first_order_difference = d.first_order;
    r.exact_difference = d.exact;
    r.linewidth = config.mech_linewidth;
    r.ratio = d.first_order / config.mech_linewidth;
    r.feasible = r.ratio > 1.0;
    r.coupling_freq_scaling_exponent = -1.0;
    r.scaling_note =
        "couplings scale with the zero-point motion, g ~ x_zpm^2 ~ 1/mech_freq; "
        "lower-frequency resonators enhance the difference proportionally";
    return r;
}

MultimodeConfig scale_couplings_with_frequency(const MultimodeConfig& config, double old_freq,
                                               double new_freq) {
    if (!(old_freq > 0.0) || !(new_freq > 0.0))
        throw NumericDomainError("frequencies must be positive");
    MultimodeConfig out = config;
    const double factor = old_freq / new_freq;
    for (OpticalMode& m : out.modes) m.coupling *= factor;
    for (double& g : out.end_residual_couplings) g *= factor;
    return out;
}

namespace {

ModeParity parse_parity(const std::string& tag) {
    if (tag == "even") return ModeParity::Even;
    if (tag == "odd") return ModeParity::Odd;
    throw ConfigError("mode parity must be \"even\" or \"odd\", got \"" + tag + "\"");
}

} // namespace

ZpeScenario parse_multimode_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("multimode config parse error: ") + e.what());
    }
    ZpeScenario s;
    try {
        s.mech_freq = j.at("mech_freq").get<double>();
        s.config.mech_linewidth = j.at("mech_linewidth").get<double>();
        for (const auto& jm : j.at("modes")) {
            OpticalMode m;
            m.index = jm.value("index", static_cast<int>(s.config.modes.size()));
            m.coupling = jm.at("coupling").get<double>();
            m.parity = parse_parity(jm.at("parity").get<std::string>());
            m.occupancy = jm.value("occupancy", 0L);
            s.config.modes.push_back(m);
        }
        if (j.contains("end_residual_couplings"))
            s.config.end_residual_couplings =
                j.at("end_residual_couplings").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("multimode config field error: ") + e.what());
    }
    return s;
}

ZpeScenario load_multimode_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open multimode config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_multimode_config(buf.str());
}

std::string feasibility_report_json(const FeasibilityReport& r) {
    nlohmann::json j;
    j["mech_freq"] = r.mech_freq;
    j["first_order_difference"] = r.first_order_difference;
    j["exact_difference"] = r.exact_difference;
    j["linewidth"] = r.linewidth;
    j["ratio"] = r.ratio;
    j["feasible"] = r.feasible;
    j["coupling_freq_scaling_exponent"] = r.coupling_freq_scaling_exponent;
    j["scaling_note"] = r.scaling_note;
    return j.dump(2);
}

std::string feasibility_report_text(const FeasibilityReport& r) {
    std::ostringstream os;
    os << "ZPE frequency-difference feasibility\n"
       << "  mechanical frequency:   " << r.mech_freq << "\n"
       << "  first-order difference: " << r.first_order_difference << "\n"
       << "  exact difference:       " << r.exact_difference << "\n"
       << "  mechanical linewidth:   " << r.linewidth << "\n"
       << "  difference / linewidth: " << r.ratio << "\n"
       << "  verdict:                " << (r.feasible ? "feasible" : "not feasible") << "\n"
       << "  scaling:                " << r.scaling_note << "\n";
    return os.str();
}

} // namespace qom
