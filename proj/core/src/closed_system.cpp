#include "qom/closed_system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qom {

DressedSector dressed_sector(const SystemParams& params, long n) {
    params.validate();
    if (n < 0) throw NumericDomainError("photon sector index must be >= 0");
    const double omega = params.mech_freq;
    const double g = params.coupling;
    const double chi = g * (static_cast<double>(n) + 0.5);
    const double ratio = 4.0 * chi / omega;
    if (1.0 + ratio <= 0.0)
        throw UnphysicalCouplingError("squeezing logarithm argument is non-positive");

    DressedSector s;
    s.n = n;
    s.chi = chi;
    s.squeeze_r = -0.25 * std::log1p(ratio);
    s.dressed_freq = omega * std::sqrt(1.0 + ratio);
    s.rwa_violated = (2.0 * g * static_cast<double>(n) >= omega);
    return s;
}

RevivalTimes revival_times(const SystemParams& params, Complex alpha) {
    params.validate();
    const double na = std::norm(alpha);
    if (na == 0.0) throw UndefinedRevivalError("revival times undefined for a vacuum cavity state");
    if (params.coupling <= 0.0)
        throw UndefinedRevivalError("revival times undefined for zero coupling");
    const double omega = params.mech_freq;
    const double g = params.coupling;
    RevivalTimes t;
    t.carrier_freq = std::sqrt(omega * omega + 4.0 * g * na * omega);
    t.revival = M_PI * t.carrier_freq / (g * omega);
    t.collapse = t.revival / (2.0 * M_PI * std::abs(alpha));
    return t;
}

SectorEvolver::SectorEvolver(const SystemParams& params, Index phonon_cutoff)
    : params_(params), cutoff_(phonon_cutoff) {
    params_.validate();
    if (cutoff_ < 1) throw InvalidDimensionError("phonon cutoff must be >= 1");
}

const Matrix& SectorEvolver::squeeze_matrix(long n) const {
    auto it = squeeze_cache_.find(n);
    if (it != squeeze_cache_.end()) return it->second;

    const DressedSector sec = dressed_sector(params_, n);
    // Generator r((b†)² - b²)/2 on the truncated space.
    Matrix gen = Matrix::Zero(cutoff_, cutoff_);
    for (Index k = 0; k + 2 < cutoff_; ++k) {
        const double w =
            0.5 * sec.squeeze_r * std::sqrt(static_cast<double>((k + 1) * (k + 2)));
        gen(k + 2, k) = w;
        gen(k, k + 2) = -w;
    }
    Matrix s = matrix_exponential(gen);
    return squeeze_cache_.emplace(n, std::move(s)).first->second;
}

Matrix SectorEvolver::propagator(long n, double t) const {
    if (!std::isfinite(t)) throw NumericDomainError("propagation time must be finite");
    const DressedSector sec = dressed_sector(params_, n);
    const Matrix& s = squeeze_matrix(n);
    Vector d(cutoff_);
    for (Index k = 0; k < cutoff_; ++k) {
        const double phase =
            (sec.dressed_freq * (static_cast<double>(k) + 0.5) - 0.5 * params_.mech_freq) * t;
        d(k) = std::polar(1.0, -phase);
    }
    return s * d.asDiagonal() * s.adjoint();
}

Vector SectorEvolver::apply(long n, double t, const Vector& phi) const {
    if (phi.size() != cutoff_) throw InvalidDimensionError("phonon vector does not match cutoff");
    const DressedSector sec = dressed_sector(params_, n);
    const Matrix& s = squeeze_matrix(n);
    Vector w = s.adjoint() * phi;
    for (Index k = 0; k < cutoff_; ++k) {
        const double phase =
            (sec.dressed_freq * (static_cast<double>(k) + 0.5) - 0.5 * params_.mech_freq) * t;
        w(k) *= std::polar(1.0, -phase);
    }
    return s * w;
}

Complex SectorEvolver::photon_phase(long n, double t) const {
    return std::polar(1.0, -params_.cav_freq * static_cast<double>(n) * t);
}

Matrix sector_propagator(const SystemParams& params, long n, double t) {
    SectorEvolver evolver(params, params.phonon_cutoff);
    return evolver.propagator(n, t);
}

namespace {

double top_level_mass(const Eigen::VectorXd& populations) {
    const Index n = populations.size();
    double mass = populations(n - 1);
    if (n > 1) mass += populations(n - 2);
    return mass;
}

void record_leak(EvolveDiagnostics& diag, long sector, double weighted_leak) {
    if (weighted_leak > diag.max_leak) {
        diag.max_leak = weighted_leak;
        diag.worst_sector = sector;
    }
}

[[noreturn]] void throw_leak(const EvolveDiagnostics& diag) {
    std::ostringstream os;
    os << "phonon cutoff leakage " << diag.max_leak << " > 1e-6 in photon sector "
       << diag.worst_sector;
    throw TruncationError(os.str(), -1, diag.worst_sector, diag.max_leak);
}

// Photon-number weights of a number-diagonal mixed state; rejects states with
// coherences between photon numbers.
Eigen::VectorXd diagonal_photon_weights(const Matrix& rho) {
    Matrix off = rho;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > 1e-12)
        throw Error("mixed photon states must be diagonal in the number basis");
    return rho.diagonal().real();
}

} // namespace

QuantumState evolve_joint(const SystemParams& params, const QuantumState& photon,
                          const QuantumState& phonon, double t, EvolveDiagnostics* diag_out) {
    params.validate();
    if (photon.dims().size() != 1 || phonon.dims().size() != 1)
        throw InvalidDimensionError("evolve_joint takes single-mode photon and phonon states");
    const Index na = photon.dims()[0];
    const Index nb = phonon.dims()[0];
    SectorEvolver evolver(params, nb);
    EvolveDiagnostics diag;

    QuantumState result = [&]() -> QuantumState {
        if (photon.is_pure() && phonon.is_pure()) {
            const Vector& c = photon.vec();
            const Vector& phi = phonon.vec();
            Vector out = Vector::Zero(na * nb);
            for (Index n = 0; n < na; ++n) {
                const double weight = std::norm(c(n));
                if (weight < 1e-300) continue;
                Vector block = evolver.apply(n, t, phi);
                record_leak(diag, n, weight * top_level_mass(block.cwiseAbs2()));
                out.segment(n * nb, nb) = c(n) * evolver.photon_phase(n, t) * block;
            }
            return QuantumState::pure(std::move(out), {na, nb});
        }

        // Density-path: factor the phonon state as rho_b = L L^dagger.
        Matrix l;
        if (phonon.is_pure()) {
            l = phonon.vec();
        } else {
            Eigen::SelfAdjointEigenSolver<Matrix> es(phonon.dm());
            const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
            l = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
        }

        if (photon.is_pure()) {
            const Vector& c = photon.vec();
            if (static_cast<double>(na) * static_cast<double>(nb) > 6000.0)
                throw InvalidDimensionError(
                    "joint density matrix too large; use a pure phonon state or lower cutoffs");
            std::vector<Matrix> evolved(na);
            for (Index n = 0; n < na; ++n) {
                if (std::norm(c(n)) < 1e-300) continue;
                evolved[n] = evolver.propagator(n, t) * l;
                record_leak(diag, n,
                            std::norm(c(n)) * top_level_mass(evolved[n].rowwise().squaredNorm()));
            }
            Matrix rho = Matrix::Zero(na * nb, na * nb);
            for (Index n = 0; n < na; ++n) {
                if (std::norm(c(n)) < 1e-300) continue;
                for (Index m = 0; m < na; ++m) {
                    if (std::norm(c(m)) < 1e-300) continue;
                    const Complex w = c(n) * std::conj(c(m)) * evolver.photon_phase(n - m, t);
                    rho.block(n * nb, m * nb, nb, nb) = w * (evolved[n] * evolved[m].adjoint());
                }
            }
            return QuantumState::density(std::move(rho), {na, nb});
        }

        const Eigen::VectorXd q = diagonal_photon_weights(photon.dm());
        if (static_cast<double>(na) * static_cast<double>(nb) > 6000.0)
            throw InvalidDimensionError("joint density matrix too large; lower the cutoffs");
        Matrix rho = Matrix::Zero(na * nb, na * nb);
        for (Index n = 0; n < na; ++n) {
            if (q(n) < 1e-300) continue;
            Matrix block = evolver.propagator(n, t) * l;
            record_leak(diag, n, q(n) * top_level_mass(block.rowwise().squaredNorm()));
            rho.block(n * nb, n * nb, nb, nb) = q(n) * (block * block.adjoint());
        }
        return QuantumState::density(std::move(rho), {na, nb});
    }();

    if (diag_out) *diag_out = diag;
    if (diag.max_leak > 1e-6) throw_leak(diag);
    return result;
}

std::vector<double> mean_displacement_exact(const SystemParams& params, Complex alpha,
                                            Complex beta, const std::vector<double>& times) {
    params.validate();
    const std::vector<double> q = number_distribution(StateSpec::coherent(alpha), 1e-10);
    const double x0 = 2.0 * beta.real();
    const double p0 = 2.0 * beta.imag();
    const double omega = params.mech_freq;

    std::vector<double> freq(q.size());
    for (std::size_t n = 0; n < q.size(); ++n)
        freq[n] = dressed_sector(params, static_cast<long>(n)).dressed_freq;

    std::vector<double> out(times.size());
    std::vector<double> terms(q.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        for (std::size_t n = 0; n < q.size(); ++n) {
            const double w = freq[n];
            terms[n] = q[n] * (std::cos(w * t) * x0 + (omega / w) * std::sin(w * t) * p0);
        }
        out[i] = pairwise_sum(terms);
    }
    return out;
}

namespace {

struct EnvelopeFrame {
    double carrier = 0.0;   // dressed frequency at the mean photon number
    double revival = 0.0;   // 2*pi / (d varpi / dn at nbar)
    double collapse = 0.0;
    double nbar = 0.0;
};

EnvelopeFrame envelope_frame(const SystemParams& params, Complex alpha) {
    EnvelopeFrame f;
    f.nbar = std::norm(alpha);
    const double omega = params.mech_freq;
    const double g = params.coupling;
    f.carrier = std::sqrt(omega * omega + 4.0 * g * omega * (f.nbar + 0.5));
    if (g > 0.0) {
        f.revival = M_PI * f.carrier / (g * omega);
        f.collapse = (f.nbar > 0.0) ? f.revival / (2.0 * M_PI * std::sqrt(f.nbar)) : 0.0;
    }
    return f;
}

} // namespace

std::vector<long> envelope_terms(const SystemParams& params, Complex alpha, double t_min,
                                 double t_max) {
    const EnvelopeFrame f = envelope_frame(params, alpha);
    if (params.coupling <= 0.0 || f.collapse <= 0.0) return {0};
    const double reach = 8.0 * f.collapse;
    const long lo = static_cast<long>(std::floor((t_min - reach) / f.revival));
    const long hi = static_cast<long>(std::ceil((t_max + reach) / f.revival));
    std::vector<long> ms;
    for (long m = lo; m <= hi; ++m) {
        const double c = static_cast<double>(m) * f.revival;
        if (c + reach >= t_min && c - reach <= t_max) ms.push_back(m);
    }
    return ms;
}

EnvelopeRegime envelope_regime(const SystemParams& params, Complex alpha) {
    EnvelopeRegime r;
    r.few_photons = std::norm(alpha) < 10.0;
    r.strong_coupling = params.coupling > 0.1 * params.mech_freq;
    return r;
}

std::vector<double> mean_displacement_envelope(const SystemParams& params, Complex alpha,
                                               Complex beta, const std::vector<double>& times) {
    params.validate();
    const EnvelopeFrame f = envelope_frame(params, alpha);
    const double x0 = 2.0 * beta.real();
    const double p0 = 2.0 * beta.imag();
    const double omega = params.mech_freq;

    std::vector<double> out(times.size(), 0.0);
    if (times.empty()) return out;

    if (params.coupling <= 0.0 || f.collapse <= 0.0) {
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double th = f.carrier * times[i];
            out[i] = x0 * std::cos(th) + p0 * (omega / f.carrier) * std::sin(th);
        }
        return out;
    }

    const auto [tmin_it, tmax_it] = std::minmax_element(times.begin(), times.end());
    const std::vector<long> ms = envelope_terms(params, alpha, *tmin_it, *tmax_it);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        double acc = 0.0;
        for (long m : ms) {
            const double dm = static_cast<double>(m);
            const double u = (t - dm * f.revival) / f.collapse;
            if (std::abs(u) > 9.0) continue;
            const double theta = f.carrier * t - 2.0 * M_PI * f.nbar * dm;
            acc += std::exp(-0.5 * u * u) *
                   (x0 * std::cos(theta) + p0 * (omega / f.carrier) * std::sin(theta));
        }
        out[i] = acc;
    }
    return out;
}

VarianceTrace displacement_variance(const SystemParams& params, const StateSpec& cavity_spec,
                                    double nbar_th, const std::vector<double>& times) {
    params.validate();
    if (nbar_th < 0.0) throw NumericDomainError("thermal occupancy must be >= 0");
    const std::vector<double> q = number_distribution(cavity_spec, 1e-10);
    const double pref = 2.0 * nbar_th + 1.0;
    const double omega = params.mech_freq;
    const double g = params.coupling;

    std::vector<double> freq(q.size());
    for (std::size_t n = 0; n < q.size(); ++n)
        freq[n] = dressed_sector(params, static_cast<long>(n)).dressed_freq;

    VarianceTrace trace;
    trace.exact.resize(times.size());
    std::vector<double> terms(q.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        for (std::size_t n = 0; n < q.size(); ++n) {
            const double c = std::cos(freq[n] * t);
            const double s = std::sin(freq[n] * t);
            const double ow = omega / freq[n];
            terms[n] = q[n] * (c * c + ow * ow * s * s);
        }
        trace.exact[i] = pref * pairwise_sum(terms);
    }

    if (cavity_spec.kind == StateSpec::Kind::Coherent) {
        const double mu = std::norm(cavity_spec.alpha);
        const double base = (omega + 2.0 * g * mu) / (omega + 4.0 * g * mu);
        trace.printed_form.resize(times.size());
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double t = times[i];
            for (std::size_t n = 0; n < q.size(); ++n) {
                const double gn = g * static_cast<double>(n);
                terms[n] = q[n] * (2.0 * gn / (omega + 4.0 * gn)) * std::cos(2.0 * freq[n] * t);
            }
            trace.printed_form[i] = pref * (base - pairwise_sum(terms));
        }
    }
    return trace;
}

} // namespace qom
