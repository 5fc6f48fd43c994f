#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "qom/driven_cavity.hpp"

using namespace qom;

namespace {

DriveParams drive_k(double kappa = 1.0, double kappa_e = 1.0, double drive = 1.0,
                    double detuning = 0.0) {
    DriveParams d;
    d.linewidth = kappa;
    d.output_coupling = kappa_e;
    d.drive = drive;
    d.detuning = detuning;
    return d;
}

std::vector<double> grid_lin(double lo, double hi, int count) {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    return g;
}

// Drift coefficient of the steady-state equation for the sector-n Gaussian
// center: alpha' = -(i(-Delta + 2gn) + kappa/2) alpha + E. Independent route
// used as the fixed-point oracle.
Complex drift(Complex alpha, long n, const DriveParams& d, double g) {
    return -(Complex(0.0, 1.0) * (-d.detuning + 2.0 * g * static_cast<double>(n)) +
             0.5 * d.linewidth) *
               alpha +
           d.drive;
}

} // namespace

TEST_CASE("drive parameter validation and the weak-drive flag") {
    CHECK_THROWS_AS(drive_k(1.0, 1.5).validate(), NumericDomainError);  // kappa_e > kappa
    CHECK_THROWS_AS(drive_k(0.0).validate(), NumericDomainError);
    CHECK_NOTHROW(drive_k(1.0, 0.5).validate());

    // |alpha|^2 g / Omega over the 0.1 threshold trips the flag
    const DriveParams strong = drive_k(1.0, 1.0, 10.0, 0.0);  // |alpha|^2 = 400
    CHECK_FALSE(strong.rwa_ok(0.01, 1.0));
    const DriveParams weak = drive_k(1.0, 1.0, 0.01);
    CHECK(weak.rwa_ok(0.01, 1.0));
}

TEST_CASE("phonon distributions: constructors and invariants") {
    const PhononDistribution f3 = PhononDistribution::fock(3);
    CHECK(f3.probabilities.size() == 4);
    CHECK(f3.probabilities[3] == 1.0);
    f3.validate();

    const double nbar = 2.5;
    const PhononDistribution th = PhononDistribution::thermal(nbar);
    th.validate();
    // printed form p_n = (1/nbar)(nbar/(nbar+1))^{n+1} equals nbar^n/(nbar+1)^{n+1}
    for (std::size_t n = 0; n < 10; ++n) {
        const double printed = (1.0 / nbar) * std::pow(nbar / (nbar + 1.0), n + 1);
        const double standard = std::pow(nbar, n) / std::pow(nbar + 1.0, n + 1);
        CHECK(printed == doctest::Approx(standard).epsilon(1e-14));
        CHECK(th.probabilities[n] == doctest::Approx(printed).epsilon(1e-12));
    }
    CHECK(th.mean() == doctest::Approx(nbar).epsilon(1e-10));

    const PhononDistribution coh = PhononDistribution::coherent(10.0);
    coh.validate();
    // Poisson probabilities within 1e-6 of the analytic values
    double logfact = 0.0;
    for (std::size_t n = 0; n < 30; ++n) {
        if (n > 0) logfact += std::log(static_cast<double>(n));
        const double analytic = std::exp(-10.0 + n * std::log(10.0) - logfact);
        CHECK(std::abs(coh.probabilities[n] - analytic) < 1e-6);
    }

    CHECK_THROWS_AS(PhononDistribution::custom({0.5, 0.4}), NumericDomainError);
    CHECK_NOTHROW(PhononDistribution::custom({0.5, 0.5}));
}

TEST_CASE("steady-state Gaussian centers: resonance, decoupling, drift fixed point") {
    const DriveParams d = drive_k(1.0, 1.0, 0.3, 0.0);
    const double g = 0.7;
    // sector resonance Delta = 2gn gives the real center 2E/kappa
    DriveParams res = d;
    res.detuning = 2.0 * g * 4.0;
    const Complex a4 = steady_q_center(4, res, g);
    CHECK(std::abs(a4 - Complex(0.6, 0.0)) < 1e-14);

    // g = 0: every sector shares the bare-cavity amplitude
    for (long n : {0L, 3L, 9L})
        CHECK(std::abs(steady_q_center(n, d, 0.0) - d.bare_intracavity()) < 1e-15);

    // the center is the zero of the Fokker-Planck drift in every sector
    for (long n : {0L, 1L, 5L, 12L}) {
        DriveParams dd = drive_k(0.8, 0.6, 0.21, 0.4);
        const Complex an = steady_q_center(n, dd, g);
        CHECK(std::abs(drift(an, n, dd, g)) < 1e-12);
    }
}

TEST_CASE("intracavity amplitude: single sector, linearity in the weights") {
    const DriveParams d = drive_k(1.0, 1.0, 0.2, 0.35);
    const double g = 0.05;
    const Complex lorentz0 = intracavity_amplitude(PhononDistribution::fock(0), d, g);
    CHECK(std::abs(lorentz0 - steady_q_center(0, d, g) ) < 1e-15);

    const Complex a0 = intracavity_amplitude(PhononDistribution::fock(0), d, g);
    const Complex a1 = intracavity_amplitude(PhononDistribution::fock(1), d, g);
    const Complex mix =
        intracavity_amplitude(PhononDistribution::custom({0.5, 0.5}), d, g);
    CHECK(std::abs(mix - 0.5 * (a0 + a1)) < 1e-15);
}

TEST_CASE("thermal amplitude matches the closed form at n = 50") {
    const DriveParams d = drive_k(1.0, 1.0, 1.0);
    const double g = 0.01;
    const double nbar = 50.0;
    const std::vector<double> grid = grid_lin(-2.0, 4.0, 41);
    const TransmissionTrace direct =
        transmission(PhononDistribution::thermal(nbar), d, g, grid);
    const TransmissionTrace closed = thermal_transmission_closed_form(nbar, d, g, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(direct.transmission[i] - closed.transmission[i]) <
              1e-8 * closed.transmission[i]);
}

TEST_CASE("transmission: unit resonant peak, bounds, drive-strength cancellation") {
    const double g = 2.0;
    const DriveParams d = drive_k(1.0, 1.0, 0.05);
    const std::vector<double> grid = grid_lin(-2.0, 10.0, 1201);
    const TransmissionTrace t3 = transmission(PhononDistribution::fock(2), d, g, grid);
    // peak value (kappa_e/kappa)^2 = 1 at Delta = 2gn
    const double vmax = *std::max_element(t3.transmission.begin(), t3.transmission.end());
    CHECK(vmax == doctest::Approx(1.0).epsilon(1e-6));
    const std::size_t imax = static_cast<std::size_t>(
        std::max_element(t3.transmission.begin(), t3.transmission.end()) -
        t3.transmission.begin());
    CHECK(std::abs(grid[imax] - 2.0 * g * 2.0) <= grid[1] - grid[0]);
    for (double v : t3.transmission) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-9);
    }

    // E-independence: the drive strength cancels exactly
    DriveParams d10 = d;
    d10.drive = 10.0 * d.drive;
    const TransmissionTrace t10 = transmission(PhononDistribution::fock(2), d10, g, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(t10.transmission[i] - t3.transmission[i]) <=
              1e-14 * std::max(1.0, t3.transmission[i]));
}

TEST_CASE("peak-position law for Fock states") {
    const double g = 3.0;
    const DriveParams d = drive_k(1.0, 0.8, 0.1);
    for (long n : {0L, 1L, 4L}) {
        const std::vector<double> grid = grid_lin(-2.0, 30.0, 3201);
        const TransmissionTrace tr = transmission(PhononDistribution::fock(n), d, g, grid);
        const std::size_t imax = static_cast<std::size_t>(
            std::max_element(tr.transmission.begin(), tr.transmission.end()) -
            tr.transmission.begin());
        CHECK(std::abs(grid[imax] - 2.0 * g * static_cast<double>(n)) <= grid[1] - grid[0]);
    }
}

TEST_CASE("thermal closed form: zero-temperature Lorentzian and series diagnostics") {
    const DriveParams d = drive_k(1.0, 1.0, 0.7);
    const std::vector<double> grid = grid_lin(-3.0, 3.0, 61);
    ClosedFormReport rep;
    const TransmissionTrace t0 = thermal_transmission_closed_form(0.0, d, 0.02, grid, &rep);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double lorentz = 1.0 / (1.0 + 4.0 * grid[i] * grid[i]);
        CHECK(std::abs(t0.transmission[i] - lorentz) < 1e-14);
    }
    CHECK(rep.method == "series");

    // |t|^2 at Delta = 0, kappa_e = kappa, nbar = 1, g = kappa: finite, inside (0, 1);
    // oracle: direct truncated sum with geometric tail below 1e-12
    const TransmissionTrace mid =
        thermal_transmission_closed_form(1.0, d, 1.0, {0.0});
    CHECK(mid.transmission[0] > 0.0);
    CHECK(mid.transmission[0] < 1.0);
    const TransmissionTrace oracle =
        transmission(PhononDistribution::thermal(1.0, 1e-13), d, 1.0, {0.0});
    CHECK(std::abs(mid.transmission[0] - oracle.transmission[0]) <
          1e-8 * oracle.transmission[0]);
}

TEST_CASE("closed form / direct sum equivalence over the parameter lattice") {
    const DriveParams d = drive_k(1.0, 1.0, 1.0);
    for (double nbar : {1.0, 10.0, 50.0, 200.0}) {
        for (double g : {1e-3, 1e-2, 1e-1, 4.0}) {
            const double hi = 2.0 * (1.0 + 4.0 * g * nbar);
            const std::vector<double> grid = grid_lin(-2.0, hi, 25);
            const TransmissionTrace direct =
                transmission(PhononDistribution::thermal(nbar, 1e-14), d, g, grid);
            const TransmissionTrace closed =
                thermal_transmission_closed_form(nbar, d, g, grid);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                CHECK(std::abs(direct.transmission[i] - closed.transmission[i]) <=
                      1e-6 * std::max(closed.transmission[i], 1e-300));
            }
        }
    }
}

TEST_CASE("extracted statistics: single Fock peak and the unresolved-regime error") {
    const double g = 4.0;
    const DriveParams d = drive_k(1.0, 1.0, 0.02);
    const PhononDistribution f3 = PhononDistribution::fock(3);
    const std::vector<double> grid = default_detuning_grid(d, g, f3, 0.05);
    const TransmissionTrace tr = transmission(f3, d, g, grid);
    const PhononDistribution est = extract_statistics(tr, d, g);
    CHECK(est.probabilities.size() == 4);
    CHECK(std::abs(est.probabilities[3] - 1.0) < 1e-3);

    CHECK_THROWS_AS(extract_statistics(tr, d, 0.4), RegimeError);  // 4g < 2 kappa
}

TEST_CASE("extracted statistics: Poisson weights and the round-trip property") {
    const double g = 4.0;
    const DriveParams d = drive_k(1.0, 1.0, 0.02);
    const PhononDistribution gen = PhononDistribution::coherent(10.0);
    const std::vector<double> grid = default_detuning_grid(d, g, gen, 0.05);
    const TransmissionTrace tr = transmission(gen, d, g, grid);
    const PhononDistribution est = extract_statistics(tr, d, g);

    double tv = 0.0;
    const std::size_t count = std::max(est.probabilities.size(), gen.probabilities.size());
    for (std::size_t n = 0; n < count; ++n) {
        const double a = n < est.probabilities.size() ? est.probabilities[n] : 0.0;
        const double b = n < gen.probabilities.size() ? gen.probabilities[n] : 0.0;
        tv += std::abs(a - b);
    }
    CHECK(0.5 * tv < 0.02);

    const TransmissionTrace back = transmission(est, d, g, grid);
    const double vmax = *std::max_element(tr.transmission.begin(), tr.transmission.end());
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        sup = std::max(sup, std::abs(back.transmission[i] - tr.transmission[i]));
    CHECK(sup / vmax < 0.01);
}

TEST_CASE("thermal vs coherent lineshape contrast at matched mean occupation") {
    const DriveParams d = drive_k(1.0, 1.0, 0.01);
    const double g = 0.01;
    const double nbar = 50.0;
    const std::vector<double> grid =
        default_detuning_grid(d, g, PhononDistribution::thermal(nbar), 0.005);
    const TransmissionTrace thermal =
        transmission(PhononDistribution::thermal(nbar), d, g, grid);
    const TransmissionTrace coherent =
        transmission(PhononDistribution::coherent(nbar), d, g, grid);

    CHECK(trace_skewness(thermal) > 0.0);
    CHECK(mirror_asymmetry(coherent) < 0.02);
    CHECK(mirror_asymmetry(thermal) > 0.05);

    // the coherent profile sits at the shifted center 2 g nbar, away from 0
    const std::size_t imax = static_cast<std::size_t>(
        std::max_element(coherent.transmission.begin(), coherent.transmission.end()) -
        coherent.transmission.begin());
    CHECK(std::abs(grid[imax] - 2.0 * g * nbar) < 0.2);
}

TEST_CASE("temperature fit: self-inversion, zero-temperature, identifiability") {
    const DriveParams d = drive_k(1.0, 1.0, 0.01);
    const double g = 0.01;
    const double nbar = 50.0;
    const std::vector<double> grid =
        default_detuning_grid(d, g, PhononDistribution::thermal(nbar), 0.05);
    const TransmissionTrace data = thermal_transmission_closed_form(nbar, d, g, grid);

    const TemperatureFit fit = fit_temperature(data, d, g);
    CHECK(std::abs(fit.nbar - nbar) / nbar < 0.005);
    CHECK(fit.converged);
    CHECK(fit.residual_norm < 1e-8);

    // residual has positive curvature at the optimum (strict local minimum)
    CHECK(fit.uncertainty >= 0.0);
    CHECK(std::isfinite(fit.uncertainty));

    const TransmissionTrace cold = thermal_transmission_closed_form(0.0, d, g, grid);
    const TemperatureFit fit0 = fit_temperature(cold, d, g);
    CHECK(std::abs(fit0.nbar) < 1e-3);
    CHECK(fit0.boundary_pinned);

    CHECK_THROWS_AS(
        fit_temperature(thermal_transmission_closed_form(1.0, d, g, grid_lin(0, 1, 5)), d, g),
        Error);
}

TEST_CASE("temperature fit under 1% multiplicative noise (100 seeded draws)") {
    const DriveParams d = drive_k(1.0, 1.0, 0.01);
    const double g = 0.01;
    const double nbar = 50.0;
    const std::vector<double> grid =
        default_detuning_grid(d, g, PhononDistribution::thermal(nbar), 0.05);
    const TransmissionTrace clean = thermal_transmission_closed_form(nbar, d, g, grid);

    std::mt19937_64 rng(20240917);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> errors;
    for (int draw = 0; draw < 100; ++draw) {
        TransmissionTrace noisy = clean;
        for (double& v : noisy.transmission) v = std::max(0.0, v * (1.0 + 0.01 * gauss(rng)));
        const TemperatureFit fit = fit_temperature(noisy, d, g);
        errors.push_back(std::abs(fit.nbar - nbar) / nbar);
    }
    std::sort(errors.begin(), errors.end());
    CHECK(errors[50] < 0.05);  // median recovery within 5%
}

TEST_CASE("lineshape area: analytic Lorentzian value and support warning") {
    const DriveParams d = drive_k(1.0, 1.0, 0.5);
    const std::vector<double> wide = grid_lin(-800.0, 800.0, 160001);
    const TransmissionTrace lorentz =
        transmission(PhononDistribution::fock(0), d, 0.01, wide);
    const LineshapeArea area = lineshape_area(lorentz);
    CHECK(std::abs(area.area - M_PI / 2.0) / (M_PI / 2.0) < 0.005);
    CHECK_FALSE(area.truncated_support);

    const std::vector<double> narrow = grid_lin(-3.0, 3.0, 301);
    const LineshapeArea cut =
        lineshape_area(transmission(PhononDistribution::fock(0), d, 0.01, narrow));
    CHECK(cut.truncated_support);
    CHECK(cut.max_boundary_value > 1e-6);
}

TEST_CASE("lineshape area invariance holds in the narrow-lineshape regime") {
    // In the coherent-field transmission of the model, exact area invariance
    // requires the peak spread 2 g sigma_n to stay well inside kappa; checked
    // here at g = 1e-4 kappa over thermal, coherent, Fock and random weights.
    const DriveParams d = drive_k(1.0, 1.0, 0.3);
    const double g = 1e-4;
    const std::vector<double> grid = grid_lin(-60.0, 60.0, 24001);
    const double ref =
        lineshape_area(transmission(PhononDistribution::fock(0), d, g, grid)).area;

    std::vector<PhononDistribution> dists = {PhononDistribution::thermal(50.0),
                                             PhononDistribution::coherent(50.0)};
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 5; ++k) {
        std::vector<double> p(12);
        double total = 0.0;
        for (double& x : p) {
            x = u(rng);
            total += x;
        }
        for (double& x : p) x /= total;
        dists.push_back(PhononDistribution::custom(p));
    }
    for (const PhononDistribution& dist : dists) {
        const double area = lineshape_area(transmission(dist, d, g, grid)).area;
        CHECK(std::abs(area / ref - 1.0) < 0.01);
    }
}

TEST_CASE("lineshape area is state-dependent once the spread reaches kappa") {
    // documented deviation from the idealized area-invariance claim: at
    // g = 0.01 kappa and nbar = 50 the thermal profile integrates well below
    // the Fock-state Lorentzian
    const DriveParams d = drive_k(1.0, 1.0, 0.3);
    const double g = 0.01;
    const std::vector<double> grid = grid_lin(-60.0, 63.0, 24601);
    const double ref =
        lineshape_area(transmission(PhononDistribution::fock(0), d, g, grid)).area;
    const double thermal =
        lineshape_area(transmission(PhononDistribution::thermal(50.0), d, g, grid)).area;
    CHECK(thermal / ref < 0.75);
}
