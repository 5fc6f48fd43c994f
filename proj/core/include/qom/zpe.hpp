#ifndef QOM_ZPE_HPP
#define QOM_ZPE_HPP

#include <string>
#include <vector>

#include "qom/errors.hpp"

namespace qom {

enum class ModeParity { Even, Odd };

struct OpticalMode {
    int index = 0;
    double coupling = 0.0;
    ModeParity parity = ModeParity::Even;
    long occupancy = 0;
};

struct MultimodeConfig {
    std::vector<OpticalMode> modes;
    /// Mechanical linewidth Γ (same units as the couplings).
    double mech_linewidth = 0.0;
    /// Residual quadratic couplings at the low-symmetry (end) position;
    /// empty models the idealized bare-frequency end point.
    std::vector<double> end_residual_couplings;
};

/// Dressed mechanical frequency under many quadratically coupled modes:
/// sqrt(Ω² + 4Ω Σ_j g_j (n_j + 1/2)).
double dressed_mech_freq_multimode(double mech_freq, const MultimodeConfig& config);

/// Frequency difference between the two membrane positions caused by the
/// vacuum of the even modes. first_order = G = 2 Σ_even g_j; exact evaluates
/// the same shift without linearizing:
/// sqrt(Ω² + 4Ω Σ_even g_j) - sqrt(Ω² + 4Ω Σ residual).
struct FrequencyDifference {
    double first_order = 0.0;
    double exact = 0.0;
};

FrequencyDifference zpe_frequency_difference(double mech_freq, const MultimodeConfig& config);

struct FeasibilityReport {
    double mech_freq = 0.0;
    double first_order_difference = 0.0;
    double exact_difference = 0.0;
    double linewidth = 0.0;
    double ratio = 0.0;
    bool feasible = false;
    /// Couplings scale as x_zpm² ∝ 1/Ω; exponent recorded for sweep tooling.
    double coupling_freq_scaling_exponent = -1.0;
    std::string scaling_note;
};

/// Measurability verdict: the difference must surpass the mechanical linewidth.
FeasibilityReport feasibility_report(double mech_freq, const MultimodeConfig& config);

/// Rescales every coupling by (old_freq/new_freq) per the 1/Ω scaling law.
MultimodeConfig scale_couplings_with_frequency(const MultimodeConfig& config, double old_freq,
                                               double new_freq);

struct ZpeScenario {
    double mech_freq = 0.0;
    MultimodeConfig config;
};

/// Loads {mech_freq, mech_linewidth, modes:[{index, coupling, parity,
/// occupancy}], end_residual_couplings:[...]} from a JSON file.
ZpeScenario load_multimode_config(const std::string& path);
ZpeScenario parse_multimode_config(const std::string& json_text);

std::string feasibility_report_json(const FeasibilityReport& report);
std::string feasibility_report_text(const FeasibilityReport& report);

} // namespace qom

#endif // QOM_ZPE_HPP
