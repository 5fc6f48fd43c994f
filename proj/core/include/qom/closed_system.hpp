#ifndef QOM_CLOSED_SYSTEM_HPP
#define QOM_CLOSED_SYSTEM_HPP

#include <map>
#include <vector>

#include "qom/fock.hpp"

namespace qom {

/// Bogoliubov data of the photon sector n: squeezing parameter
/// r(n) = -1/4 log(1 + 4g(n+1/2)/Ω) and dressed mechanical frequency
/// ϖ_n = sqrt(Ω² + 4gΩ(n+1/2)).
struct DressedSector {
    long n = 0;
    double squeeze_r = 0.0;
    double dressed_freq = 0.0;
    /// g (n + 1/2)
    double chi = 0.0;
    /// 2 g n >= Ω: the resonant (rotating-wave) term no longer dominates.
    bool rwa_violated = false;
};

DressedSector dressed_sector(const SystemParams& params, long n);

/// Collapse/revival times of the mean displacement for a cavity coherent
/// state alpha:  T_rev = 2π|α| T_coll = π sqrt(Ω² + 4g|α|²Ω) / (gΩ).
struct RevivalTimes {
    double collapse = 0.0;
    double revival = 0.0;
    /// ϖ_α = sqrt(Ω² + 4g|α|²Ω)
    double carrier_freq = 0.0;
};

RevivalTimes revival_times(const SystemParams& params, Complex alpha);

/// Builds and caches per-sector phonon-space propagators at a fixed cutoff.
///
/// U_n(t) = S(r_n) exp(-i (ϖ_n(k+1/2) - Ω/2) t) S(r_n)†  with
/// S(r) = exp(r((b†)² - b²)/2) equals exp(-i H_n t) for the sector
/// Hamiltonian H_n = Ω b†b + g(n+1/2)(b+b†)², constant included so the
/// propagator matches the dense exponential of the sector of the full
/// Hamiltonian (photon phase exp(-i ω_c n t) excluded; see photon_phase).
class SectorEvolver {
public:
    SectorEvolver(const SystemParams& params, Index phonon_cutoff);

    const SystemParams& params() const { return params_; }
    Index cutoff() const { return cutoff_; }

    /// Squeeze matrix S(r_n), built once per sector and cached.
    const Matrix& squeeze_matrix(long n) const;
    Matrix propagator(long n, double t) const;
    /// Applies U_n(t) to a phonon vector without forming the propagator.
    Vector apply(long n, double t, const Vector& phi) const;
    Complex photon_phase(long n, double t) const;

private:
    SystemParams params_;
    Index cutoff_;
    mutable std::map<long, Matrix> squeeze_cache_;
};

/// One-shot propagator at params.phonon_cutoff.
Matrix sector_propagator(const SystemParams& params, long n, double t);

struct EvolveDiagnostics {
    /// Max over sectors of (sector weight) x (mass in the top two phonon levels).
    double max_leak = 0.0;
    long worst_sector = -1;
};

/// Joint evolution under the full Hamiltonian. The photon state must be pure
/// or diagonal in the number basis; the phonon state is arbitrary. Throws
/// TruncationError naming the offending sector when the weighted top-level
/// leak exceeds 1e-6.
QuantumState evolve_joint(const SystemParams& params, const QuantumState& photon,
                          const QuantumState& phonon, double t,
                          EvolveDiagnostics* diag = nullptr);

/// <x(t)> for initial coherent states |alpha> (cavity) and |beta> (phonon):
/// exact Poisson-weighted sector sum of
///   cos(ϖ_n t) <x(0)> + (Ω/ϖ_n) sin(ϖ_n t) <p(0)>.
std::vector<double> mean_displacement_exact(const SystemParams& params, Complex alpha,
                                            Complex beta, const std::vector<double>& times);

/// Gaussian-envelope approximation of <x(t)>. The carrier frequency is the
/// dressed frequency at the mean photon number, ϖ(|α|²) (including the +1/2
/// zero-point term), the m-th revival is centred at m·2π/ϖ'(|α|²) and carries
/// the phase -2π|α|²m; this convention is the one that tracks the exact sum
/// (validated against it; see the tests).
std::vector<double> mean_displacement_envelope(const SystemParams& params, Complex alpha,
                                               Complex beta, const std::vector<double>& times);

/// Envelope terms m whose Gaussians overlap [t_min, t_max] (within 8 T_coll).
std::vector<long> envelope_terms(const SystemParams& params, Complex alpha, double t_min,
                                 double t_max);

/// Regime notes for the envelope approximation (|α|² >> 1 and g << Ω intended).
struct EnvelopeRegime {
    bool few_photons = false;
    bool strong_coupling = false;
};
EnvelopeRegime envelope_regime(const SystemParams& params, Complex alpha);

/// <x²(t)> for a thermal phonon state (mean nbar_th) and the given cavity
/// state. `exact` is the sector sum
///   (2 nbar + 1) Σ_n q_n [cos²(ϖ_n t) + (Ω/ϖ_n)² sin²(ϖ_n t)],
/// `printed_form` the paper-style approximation (coherent cavity states only;
/// empty otherwise). The exact sum is the ground truth: it restores the +1/2
/// in the oscillating weight and the sign that make <x²(0)> = 2 nbar + 1.
struct VarianceTrace {
    std::vector<double> exact;
    std::vector<double> printed_form;
};

VarianceTrace displacement_variance(const SystemParams& params, const StateSpec& cavity_spec,
                                    double nbar_th, const std::vector<double>& times);

} // namespace qom

#endif // QOM_CLOSED_SYSTEM_HPP
