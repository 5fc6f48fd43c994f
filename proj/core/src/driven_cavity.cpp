#include "qom/driven_cavity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace qom {

void DriveParams::validate() const {
    if (!(drive > 0.0) || !std::isfinite(drive)) throw NumericDomainError("drive must be > 0");
    if (!(linewidth > 0.0) || !std::isfinite(linewidth))
        throw NumericDomainError("linewidth must be > 0");
    if (!(output_coupling > 0.0) || output_coupling > linewidth)
        throw NumericDomainError("output coupling must lie in (0, linewidth]");
    if (!std::isfinite(detuning)) throw NumericDomainError("detuning must be finite");
}

Complex DriveParams::bare_intracavity() const {
    return drive / Complex(0.5 * linewidth, -detuning);
}

bool DriveParams::rwa_ok(double g, double mech_freq) const {
    const double photons = std::norm(bare_intracavity());
    return photons * g / mech_freq <= 0.1;
}

PhononDistribution PhononDistribution::fock(long n) {
    if (n < 0) throw NumericDomainError("fock index must be >= 0");
    PhononDistribution d;
    d.probabilities.assign(static_cast<std::size_t>(n) + 1, 0.0);
    d.probabilities.back() = 1.0;
    d.provenance = Provenance::Fock;
    return d;
}

PhononDistribution PhononDistribution::coherent(double mean_occupation, double mass_tol) {
    if (mean_occupation < 0.0) throw NumericDomainError("mean occupation must be >= 0");
    PhononDistribution d;
    d.provenance = Provenance::Coherent;
    if (mean_occupation == 0.0) {
        d.probabilities = {1.0};
        return d;
    }
    double term = std::exp(-mean_occupation);
    double mass = 0.0;
    long n = 0;
    while (mass < 1.0 - mass_tol) {
        d.probabilities.push_back(term);
        mass += term;
        ++n;
        term *= mean_occupation / static_cast<double>(n);
    }
    for (double& p : d.probabilities) p /= mass;
    return d;
}

PhononDistribution PhononDistribution::thermal(double nbar, double mass_tol) {
    if (nbar < 0.0) throw NumericDomainError("nbar must be >= 0");
    PhononDistribution d;
    d.provenance = Provenance::Thermal;
    if (nbar == 0.0) {
        d.probabilities = {1.0};
        return d;
    }
    // p_n = nbar^n / (nbar+1)^{n+1}; kept until the geometric tail is below mass_tol.
    const double z = nbar / (nbar + 1.0);
    double term = 1.0 / (nbar + 1.0);
    double mass = 0.0;
    while (mass < 1.0 - mass_tol) {
        d.probabilities.push_back(term);
        mass += term;
        term *= z;
    }
    for (double& p : d.probabilities) p /= mass;
    return d;
}

PhononDistribution PhononDistribution::custom(std::vector<double> p) {
    PhononDistribution d;
    d.probabilities = std::move(p);
    d.provenance = Provenance::Custom;
    double mass = 0.0;
    for (double x : d.probabilities) {
        if (x < 0.0 || !std::isfinite(x))
            throw NumericDomainError("probabilities must be >= 0 and finite");
        mass += x;
    }
    if (std::abs(mass - 1.0) > 1e-10)
        throw NumericDomainError("probabilities must sum to 1 within 1e-10");
    for (double& x : d.probabilities) x /= mass;
    return d;
}

double PhononDistribution::mean() const {
    double m = 0.0;
    for (std::size_t n = 0; n < probabilities.size(); ++n)
        m += static_cast<double>(n) * probabilities[n];
    return m;
}

void PhononDistribution::validate() const {
    double mass = 0.0;
    for (double p : probabilities) {
        if (p < 0.0) throw NumericDomainError("negative probability");
        mass += p;
    }
    if (std::abs(mass - 1.0) > 1e-10) throw NumericDomainError("probabilities must sum to 1");
}

Complex steady_q_center(long n, const DriveParams& drive, double g) {
    drive.validate();
    return drive.drive /
           Complex(0.5 * drive.linewidth, -(drive.detuning - 2.0 * g * static_cast<double>(n)));
}

Complex intracavity_amplitude(const PhononDistribution& dist, const DriveParams& drive, double g) {
    drive.validate();
    std::vector<Complex> terms(dist.probabilities.size());
    for (std::size_t n = 0; n < dist.probabilities.size(); ++n) {
        terms[n] = dist.probabilities[n] * drive.drive /
                   Complex(0.5 * drive.linewidth,
                           -(drive.detuning - 2.0 * g * static_cast<double>(n)));
    }
    return pairwise_sum(terms);
}

std::vector<double> default_detuning_grid(const DriveParams& drive, double g,
                                          const PhononDistribution& dist, double step) {
    const double kappa = drive.linewidth;
    if (step <= 0.0) step = kappa / 50.0;
    const double nbar = dist.mean();
    const double hi = 2.0 * kappa + 2.0 * g * (nbar + 5.0 * std::sqrt(std::max(nbar, 0.0)));
    std::vector<double> grid;
    const long count = static_cast<long>(std::floor((hi + 2.0 * kappa) / step)) + 1;
    grid.reserve(count);
    for (long i = 0; i < count; ++i) grid.push_back(-2.0 * kappa + static_cast<double>(i) * step);
    return grid;
}

TransmissionTrace transmission(const PhononDistribution& dist, const DriveParams& drive, double g,
                               const std::vector<double>& detunings) {
    drive.validate();
    dist.validate();
    TransmissionTrace trace;
    trace.detuning = detunings;
    trace.transmission.resize(detunings.size());
    DriveParams swept = drive;
    for (std::size_t i = 0; i < detunings.size(); ++i) {
        if (!std::isfinite(detunings[i])) throw NumericDomainError("detuning grid must be finite");
        swept.detuning = detunings[i];
        const Complex a = intracavity_amplitude(dist, swept, g);
        trace.transmission[i] = std::norm(drive.output_coupling * a / (2.0 * drive.drive));
    }
    return trace;
}

TransmissionTrace thermal_transmission_closed_form(double nbar, const DriveParams& drive, double g,
                                                   const std::vector<double>& detunings,
                                                   ClosedFormReport* report) {
    drive.validate();
    if (nbar < 0.0) throw NumericDomainError("nbar must be >= 0");
    ClosedFormReport rep;
    TransmissionTrace trace;
    trace.detuning = detunings;
    trace.transmission.resize(detunings.size());

    const double kappa = drive.linewidth;
    const double kappa_e = drive.output_coupling;
    const double z = nbar / (nbar + 1.0);

    bool fell_back = false;
    for (std::size_t i = 0; i < detunings.size(); ++i) {
        const double delta = detunings[i];
        if (nbar == 0.0 || g <= 0.0) {
            // Geometric weights collapse to a single Lorentzian.
            trace.transmission[i] =
                kappa_e * kappa_e / (kappa * kappa + 4.0 * delta * delta);
            continue;
        }
        const Complex b = -Complex(2.0 * delta, kappa) / (4.0 * g);
        bool ok = false;
        try {
            const Hyp2f1Result f = hyp2f1_detailed(1.0, b, b + 1.0, z);
            trace.transmission[i] = kappa_e * kappa_e /
                                    ((kappa * kappa + 4.0 * delta * delta) * (nbar + 1.0) *
                                     (nbar + 1.0)) *
                                    std::norm(f.value);
            rep.max_terms = std::max(rep.max_terms, f.terms);
            rep.max_tail_bound = std::max(rep.max_tail_bound, f.tail_bound);
            ok = true;
        } catch (const ConvergenceError&) {
            fell_back = true;
        }
        if (!ok) {
            // Direct truncated sum with a geometric tail below 1e-12.
            DriveParams swept = drive;
            swept.detuning = delta;
            const Complex a =
                intracavity_amplitude(PhononDistribution::thermal(nbar, 1e-13), swept, g);
            trace.transmission[i] = std::norm(kappa_e * a / (2.0 * drive.drive));
        }
    }
    rep.method = fell_back ? "direct-sum" : "series";
    if (report) *report = rep;
    return trace;
}

namespace {

// Heights of local maxima snapped to the Fock lattice Delta = 2gn (within
// kappa/2), parabola-refined, keyed by n. Local maxima further from the
// lattice are interference structure between peaks, not Fock peaks.
std::map<long, double> lattice_peak_heights(const TransmissionTrace& trace, double g,
                                            double kappa, double min_height) {
    std::map<long, double> heights;
    const std::vector<double>& d = trace.detuning;
    const std::vector<double>& v = trace.transmission;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (!(v[i] > v[i - 1] && v[i] >= v[i + 1]) || v[i] < min_height) continue;
        const double den = v[i - 1] - 2.0 * v[i] + v[i + 1];
        double shift = 0.0;
        double height = v[i];
        if (den < 0.0) {
            shift = 0.5 * (v[i - 1] - v[i + 1]) / den;
            height = v[i] - 0.25 * (v[i - 1] - v[i + 1]) * shift;
        }
        const double pos = d[i] + shift * (d[i + 1] - d[i]);
        const long n = std::lround(pos / (2.0 * g));
        if (n < 0 || std::abs(pos - 2.0 * g * static_cast<double>(n)) > 0.5 * kappa) continue;
        auto [it, inserted] = heights.emplace(n, height);
        if (!inserted) it->second = std::max(it->second, height);
    }
    return heights;
}

} // namespace

PhononDistribution extract_statistics(const TransmissionTrace& trace, const DriveParams& drive,
                                      double g) {
    drive.validate();
    if (trace.detuning.size() < 3) throw Error("trace too short for peak extraction");
    if (!(g > 0.0)) throw RegimeError("peak extraction needs g > 0");
    if (4.0 * g < 2.0 * drive.linewidth)
        throw RegimeError(
            "peaks unresolved (4g < 2 kappa); use the lineshape-fit mode (fit_temperature)");

    const double vmax =
        *std::max_element(trace.transmission.begin(), trace.transmission.end());
    const std::map<long, double> observed =
        lattice_peak_heights(trace, g, drive.linewidth, 1e-4 * vmax);
    if (observed.empty()) throw RegimeError("no transmission peaks found");

    // |t|^2 peak heights scale as p_n^2: amplitudes carry the probabilities.
    const long n_max = observed.rbegin()->first;
    std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (const auto& [n, h] : observed) p[n] = std::sqrt(std::max(h, 0.0));
    double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (total <= 0.0) throw RegimeError("degenerate peak heights");
    for (double& x : p) x /= total;

    // Neighbouring peaks interfere through Eq.-style amplitude addition, which
    // biases raw heights; iterate a multiplicative height match against the
    // forward model on the same grid until the corrections settle.
    PhononDistribution est;
    est.provenance = PhononDistribution::Provenance::Custom;
    for (int iter = 0; iter < 64; ++iter) {
        est.probabilities = p;
        const TransmissionTrace model = transmission(est, drive, g, trace.detuning);
        const std::map<long, double> modeled =
            lattice_peak_heights(model, g, drive.linewidth, 0.0);
        double worst = 0.0;
        for (const auto& [n, h] : observed) {
            auto it = modeled.find(n);
            if (it == modeled.end() || it->second <= 0.0) continue;
            const double r = std::sqrt(h / it->second);
            p[n] *= r;
            worst = std::max(worst, std::abs(r - 1.0));
        }
        total = std::accumulate(p.begin(), p.end(), 0.0);
        for (double& x : p) x /= total;
        if (worst < 1e-4) break;
    }
    est.probabilities = std::move(p);
    return est;
}

namespace {

double fit_chi2(double nbar, const TransmissionTrace& data, const DriveParams& drive, double g,
                long& evaluations) {
    ++evaluations;
    const TransmissionTrace model =
        thermal_transmission_closed_form(nbar, drive, g, data.detuning);
    double acc = 0.0;
    for (std::size_t i = 0; i < data.transmission.size(); ++i) {
        const double r = model.transmission[i] - data.transmission[i];
        acc += r * r;
    }
    return acc;
}

} // namespace

TemperatureFit fit_temperature(const TransmissionTrace& trace, const DriveParams& drive,
                               double g) {
    drive.validate();
    if (trace.detuning.size() < 20)
        throw Error("fit_temperature needs at least 20 grid points");

    TemperatureFit fit;
    long evals = 0;
    const auto chi2 = [&](double n) { return fit_chi2(n, trace, drive, g, evals); };

    // Bracket the minimum on a geometric ladder from 0, stopping once the
    // objective has risen past the best rung (the model cost grows with nbar).
    std::vector<double> ladder = {0.0};
    for (double n = 1.0; n <= 16384.0; n *= 2.0) ladder.push_back(n);
    std::size_t best = 0;
    double best_val = chi2(0.0);
    std::size_t evaluated = 1;
    int rising = 0;
    for (std::size_t i = 1; i < ladder.size(); ++i) {
        const double v = chi2(ladder[i]);
        evaluated = i + 1;
        if (v < best_val) {
            best_val = v;
            best = i;
            rising = 0;
        } else if (++rising >= 2) {
            break;
        }
    }
    double lo = best > 0 ? ladder[best - 1] : 0.0;
    double hi = best + 1 < evaluated ? ladder[best + 1] : ladder[evaluated - 1];
    fit.boundary_pinned = (best == 0) || (best + 1 == evaluated && evaluated == ladder.size());

    // Golden-section search.
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double fc = chi2(c);
    double fd = chi2(d);
    while (hi - lo > 1e-10 * std::max(1.0, hi)) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = chi2(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = chi2(d);
        }
    }
    double nhat = 0.5 * (lo + hi);
    double chi_min = chi2(nhat);

    // Parabolic refinement around the golden-section result.
    const double h = std::max(1e-6, 1e-6 * nhat);
    const double fm = chi2(std::max(0.0, nhat - h));
    const double fp = chi2(nhat + h);
    const double curv = (fp - 2.0 * chi_min + fm) / (h * h);
    if (curv > 0.0 && nhat - h >= 0.0) {
        const double step = 0.5 * (fm - fp) / (fp - 2.0 * chi_min + fm) * h;
        if (std::abs(step) < h) {
            const double refined = nhat + step;
            const double fr = chi2(refined);
            if (fr <= chi_min) {
                nhat = refined;
                chi_min = fr;
            }
        }
    }

    fit.nbar = nhat;
    fit.residual_norm = std::sqrt(chi_min);
    fit.model_evaluations = evals;
    const std::size_t m = trace.transmission.size();
    if (curv > 0.0) {
        const double s2 = chi_min / static_cast<double>(std::max<std::size_t>(m - 1, 1));
        fit.uncertainty = std::sqrt(2.0 * s2 / curv);
        fit.converged = true;
    } else {
        fit.uncertainty = std::numeric_limits<double>::infinity();
        fit.converged = false;
    }
    if (fit.nbar <= 1e-12) fit.boundary_pinned = true;
    return fit;
}

double trace_skewness(const TransmissionTrace& trace) {
    const std::vector<double>& d = trace.detuning;
    const std::vector<double>& v = trace.transmission;
    if (d.size() < 3) throw Error("trace too short");
    double w = 0.0, mu = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        w += v[i];
        mu += v[i] * d[i];
    }
    if (w <= 0.0) throw Error("empty trace");
    mu /= w;
    double m2 = 0.0, m3 = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double x = d[i] - mu;
        m2 += v[i] * x * x;
        m3 += v[i] * x * x * x;
    }
    m2 /= w;
    m3 /= w;
    return m3 / std::pow(m2, 1.5);
}

double mirror_asymmetry(const TransmissionTrace& trace) {
    const std::vector<double>& d = trace.detuning;
    const std::vector<double>& v = trace.transmission;
    if (d.size() < 3) throw Error("trace too short");
    std::size_t imax = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[imax]) imax = i;
    double center = d[imax];
    if (imax > 0 && imax + 1 < v.size()) {
        const double den = v[imax - 1] - 2.0 * v[imax] + v[imax + 1];
        if (den < 0.0)
            center += 0.5 * (v[imax - 1] - v[imax + 1]) / den * (d[imax + 1] - d[imax]);
    }
    const auto interp = [&](double x) {
        const auto it = std::lower_bound(d.begin(), d.end(), x);
        if (it == d.begin() || it == d.end()) return 0.0;
        const std::size_t i = static_cast<std::size_t>(it - d.begin());
        const double f = (x - d[i - 1]) / (d[i] - d[i - 1]);
        return (1.0 - f) * v[i - 1] + f * v[i];
    };
    const double reach = std::min(center - d.front(), d.back() - center);
    const int samples = 400;
    double acc = 0.0;
    for (int k = 1; k <= samples; ++k) {
        const double off = reach * static_cast<double>(k) / samples;
        const double diff = interp(center + off) - interp(center - off);
        acc += diff * diff;
    }
    return std::sqrt(acc / samples) / v[imax];
}

LineshapeArea lineshape_area(const TransmissionTrace& trace) {
    if (trace.detuning.size() < 2) throw Error("lineshape_area needs at least 2 grid points");
    LineshapeArea result;
    double area = 0.0;
    for (std::size_t i = 1; i < trace.detuning.size(); ++i) {
        area += 0.5 * (trace.transmission[i] + trace.transmission[i - 1]) *
                (trace.detuning[i] - trace.detuning[i - 1]);
    }
    result.area = area;
    const double vmax =
        *std::max_element(trace.transmission.begin(), trace.transmission.end());
    result.max_boundary_value =
        std::max(trace.transmission.front(), trace.transmission.back());
    result.truncated_support = result.max_boundary_value > 1e-6 * vmax;
    return result;
}

} // namespace qom
