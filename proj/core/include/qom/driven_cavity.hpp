#ifndef QOM_DRIVEN_CAVITY_HPP
#define QOM_DRIVEN_CAVITY_HPP

#include <string>
#include <vector>

#include "qom/fock.hpp"
#include "qom/hypergeometric.hpp"

namespace qom {

/// Parameters of the weakly driven cavity in the drive frame. The detuning
/// convention is Δ = ω_L - ω_c - g (the single-photon shift is absorbed).
struct DriveParams {
    double detuning = 0.0;
    double drive = 1.0;
    double linewidth = 1.0;
    double output_coupling = 1.0;

    void validate() const;
    /// Steady intracavity amplitude of the bare (g = 0) cavity.
    Complex bare_intracavity() const;
    /// Weak-drive condition |α|² << Ω/g; false when |α|² g / Ω > 0.1.
    bool rwa_ok(double g, double mech_freq) const;
};

/// Probabilities p_n over phonon Fock states; the weights of the steady-state
/// intracavity amplitude.
struct PhononDistribution {
    enum class Provenance { Fock, Coherent, Thermal, Custom };

    std::vector<double> probabilities;
    Provenance provenance = Provenance::Custom;

    static PhononDistribution fock(long n);
    static PhononDistribution coherent(double mean_occupation, double mass_tol = 1e-13);
    static PhononDistribution thermal(double nbar, double mass_tol = 1e-13);
    static PhononDistribution custom(std::vector<double> p);

    double mean() const;
    void validate() const;
};

/// Centre of the sector-n steady-state Q function:
/// α_n = E / (κ/2 - i(Δ - 2gn)).
Complex steady_q_center(long n, const DriveParams& drive, double g);

/// <a>_ss = Σ_n E p_n / (κ/2 - i(Δ - 2gn)).
Complex intracavity_amplitude(const PhononDistribution& dist, const DriveParams& drive, double g);

struct TransmissionTrace {
    /// Detunings in the same frequency units as the linewidth.
    std::vector<double> detuning;
    /// |t|² = |κ_e <a> / (2E)|² per grid point.
    std::vector<double> transmission;
};

/// Default sweep [-2κ, 2κ + 2g(n̄ + 5 sqrt(n̄))] at the given step (κ/50 when
/// step <= 0), covering the phonon-shifted peaks.
std::vector<double> default_detuning_grid(const DriveParams& drive, double g,
                                          const PhononDistribution& dist, double step = -1.0);

TransmissionTrace transmission(const PhononDistribution& dist, const DriveParams& drive, double g,
                               const std::vector<double>& detunings);

struct ClosedFormReport {
    /// "series" or "direct-sum" (fallback when the series stalls).
    std::string method = "series";
    long max_terms = 0;
    double max_tail_bound = 0.0;
};

/// Thermal transmission in closed form,
///   |t|² = κ_e² / ((κ² + 4Δ²)(n̄+1)²) |2F1(1, b; 1+b; n̄/(n̄+1))|²,
///   b = -(iκ + 2Δ)/(4g).
/// The (n̄+1)⁻² normalization follows from the geometric p_n and is required
/// for agreement with the direct sum (verified against it).
TransmissionTrace thermal_transmission_closed_form(double nbar, const DriveParams& drive, double g,
                                                   const std::vector<double>& detunings,
                                                   ClosedFormReport* report = nullptr);

/// Phonon statistics from a resolved-peak trace: local maxima near Δ = 2gn,
/// quadratically interpolated; p̂_n ∝ sqrt(peak height) renormalized
/// (peak heights of |t|² scale as p_n²). Throws RegimeError when 4g < 2κ.
PhononDistribution extract_statistics(const TransmissionTrace& trace, const DriveParams& drive,
                                      double g);

struct TemperatureFit {
    double nbar = 0.0;
    double residual_norm = 0.0;
    double uncertainty = 0.0;
    long model_evaluations = 0;
    bool converged = false;
    bool boundary_pinned = false;
    std::string method = "golden-section+parabolic";
};

/// Least-squares thermal-occupancy fit of a transmission trace via bracketed
/// golden-section search with a parabolic refinement; deterministic.
TemperatureFit fit_temperature(const TransmissionTrace& trace, const DriveParams& drive, double g);

struct LineshapeArea {
    double area = 0.0;
    /// Set when the trace does not decay below 1e-6 of its maximum at the
    /// grid boundary (area underestimated).
    bool truncated_support = false;
    double max_boundary_value = 0.0;
};

/// Trapezoidal integral of |t|² over detuning.
LineshapeArea lineshape_area(const TransmissionTrace& trace);

/// Skewness of the |t|²-weighted detuning distribution over the grid window.
double trace_skewness(const TransmissionTrace& trace);

/// Mirror asymmetry about the (interpolated) maximum: RMS difference between
/// the trace and its reflection, relative to the peak value.
double mirror_asymmetry(const TransmissionTrace& trace);

} // namespace qom

#endif // QOM_DRIVEN_CAVITY_HPP
