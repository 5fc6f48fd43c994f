#include "qom/phase_space.hpp"

#include <algorithm>
#include <cmath>

namespace qom {

QGridSpec QGridSpec::centered(double half_width, Index points) {
    QGridSpec s;
    s.re_min = -half_width;
    s.re_max = half_width;
    s.im_min = -half_width;
    s.im_max = half_width;
    s.re_points = points;
    s.im_points = points;
    return s;
}

double QGridSpec::re_step() const {
    return re_points > 1 ? (re_max - re_min) / static_cast<double>(re_points - 1) : 0.0;
}

double QGridSpec::im_step() const {
    return im_points > 1 ? (im_max - im_min) / static_cast<double>(im_points - 1) : 0.0;
}

double QGrid::cell_area() const { return spec.re_step() * spec.im_step(); }

namespace {

void finalize(QGrid& grid) {
    // Clip the tiny negative round-off floor permitted by the contract.
    grid.values = grid.values.cwiseMax(-1e-12);
    grid.normalization = grid.values.sum() * grid.cell_area();
    grid.window_warning = grid.normalization < 0.95;
}

// Rows of the returned matrix are truncated coherent-state amplitude vectors
// <k|alpha> for every grid point, alpha scanned row-major (im outer, re inner).
Matrix coherent_amplitudes(const QGridSpec& spec, Index dim) {
    Matrix v(spec.im_points * spec.re_points, dim);
    for (Index j = 0; j < spec.im_points; ++j) {
        const double im = spec.im_min + static_cast<double>(j) * spec.im_step();
        for (Index i = 0; i < spec.re_points; ++i) {
            const double re = spec.re_min + static_cast<double>(i) * spec.re_step();
            const Complex alpha(re, im);
            const Index row = j * spec.re_points + i;
            Complex c = std::exp(-0.5 * std::norm(alpha));
            v(row, 0) = c;
            for (Index k = 1; k < dim; ++k) {
                c *= alpha / std::sqrt(static_cast<double>(k));
                v(row, k) = c;
            }
        }
    }
    return v;
}

} // namespace

QGrid husimi_q(const QuantumState& state, const QGridSpec& spec) {
    if (state.dims().size() != 1)
        throw InvalidDimensionError("husimi_q takes a single-mode state");
    if (spec.re_points < 2 || spec.im_points < 2)
        throw InvalidDimensionError("Q grid needs at least 2x2 points");

    const Index dim = state.dim();
    const Matrix v = coherent_amplitudes(spec, dim);

    QGrid grid;
    grid.spec = spec;
    grid.values.resize(spec.im_points, spec.re_points);

    if (state.is_pure()) {
        // Q = |<alpha|psi>|^2 / pi
        const Vector overlaps = v.conjugate() * state.vec();
        for (Index j = 0; j < spec.im_points; ++j)
            for (Index i = 0; i < spec.re_points; ++i)
                grid.values(j, i) = std::norm(overlaps(j * spec.re_points + i)) / M_PI;
    } else {
        // Q = <alpha|rho|alpha> / pi, evaluated as row-wise quadratic forms.
        const Matrix vr = v.conjugate() * state.dm();
        const Eigen::VectorXd q = (vr.array() * v.array()).rowwise().sum().real();
        for (Index j = 0; j < spec.im_points; ++j)
            for (Index i = 0; i < spec.re_points; ++i)
                grid.values(j, i) = q(j * spec.re_points + i) / M_PI;
    }
    finalize(grid);
    return grid;
}

QGrid mixture_q(Complex beta, const QGridSpec& spec) {
    QGrid grid;
    grid.spec = spec;
    grid.values.resize(spec.im_points, spec.re_points);
    const Complex up = Complex(0.0, 1.0) * beta;
    for (Index j = 0; j < spec.im_points; ++j) {
        const double im = spec.im_min + static_cast<double>(j) * spec.im_step();
        for (Index i = 0; i < spec.re_points; ++i) {
            const double re = spec.re_min + static_cast<double>(i) * spec.re_step();
            const Complex alpha(re, im);
            grid.values(j, i) =
                (std::exp(-std::norm(alpha - up)) + std::exp(-std::norm(alpha + up))) /
                (2.0 * M_PI);
        }
    }
    finalize(grid);
    return grid;
}

double effective_period(const SystemParams& params, double nbar) {
    const double omega = params.mech_freq;
    const double w =
        std::sqrt(omega * omega + 4.0 * params.coupling * omega * (nbar + 0.5));
    return 2.0 * M_PI / w;
}

namespace {

QGrid q_with_auto_widen(const QuantumState& state, const SnapshotOptions& opts) {
    QGrid grid = husimi_q(state, opts.grid);
    if (!opts.auto_widen) return grid;
    QGridSpec spec = opts.grid;
    for (int attempt = 0; attempt < 3 && grid.normalization < 0.99; ++attempt) {
        const double half = std::max(std::abs(spec.re_max), std::abs(spec.im_max)) * 1.5;
        spec = QGridSpec::centered(half, std::max(spec.re_points, spec.im_points));
        grid = husimi_q(state, spec);
    }
    return grid;
}

} // namespace

std::vector<Snapshot> snapshot_series(const SystemParams& params, const StateSpec& photon_spec,
                                      const StateSpec& phonon_spec,
                                      const std::vector<double>& times_in_effective_periods,
                                      const SnapshotOptions& opts) {
    params.validate();
    const QuantumState photon = make_state(photon_spec, params.photon_cutoff);
    const QuantumState phonon = make_state(phonon_spec, params.phonon_cutoff);
    const double nbar =
        opts.effective_nbar >= 0.0 ? opts.effective_nbar : photon_spec.mean_occupation();
    const double period = effective_period(params, nbar);

    const DenseOperator x = make_position(params.phonon_cutoff);
    const DenseOperator p = make_momentum(params.phonon_cutoff);
    const Matrix x2 = x.mat * x.mat;
    const Matrix p2 = p.mat * p.mat;

    std::vector<Snapshot> out;
    out.reserve(times_in_effective_periods.size());
    for (double f : times_in_effective_periods) {
        Snapshot snap;
        snap.time_effective = f;
        snap.time = f * period;
        const QuantumState joint = evolve_joint(params, photon, phonon, snap.time);
        const QuantumState reduced = partial_trace(joint, 1);
        snap.photon_marginal = partial_trace(joint, 0).number_populations();
        snap.phonon_purity = reduced.purity();
        const double mx = reduced.expectation(x.mat).real();
        const double mp = reduced.expectation(p.mat).real();
        snap.var_x = reduced.expectation(x2).real() - mx * mx;
        snap.var_p = reduced.expectation(p2).real() - mp * mp;
        snap.grid = q_with_auto_widen(reduced, opts);
        out.push_back(std::move(snap));
    }
    return out;
}

SliceStructure real_axis_structure(const QGrid& grid) {
    const QGridSpec& spec = grid.spec;
    // Nearest row to Im(alpha) = 0.
    Index j0 = 0;
    double best = std::abs(spec.im_min);
    for (Index j = 1; j < spec.im_points; ++j) {
        const double im = spec.im_min + static_cast<double>(j) * spec.im_step();
        if (std::abs(im) < best) {
            best = std::abs(im);
            j0 = j;
        }
    }
    const Eigen::RowVectorXd slice = grid.values.row(j0);
    const double peak = slice.maxCoeff();

    SliceStructure s;
    if (peak <= 0.0) return s;
    std::vector<Index> maxima;
    for (Index i = 1; i + 1 < slice.size(); ++i) {
        if (slice(i) > slice(i - 1) && slice(i) >= slice(i + 1) && slice(i) > 0.02 * peak)
            maxima.push_back(i);
    }
    s.maxima_count = static_cast<int>(maxima.size());
    for (Index i : maxima)
        s.maxima_positions.push_back(spec.re_min + static_cast<double>(i) * spec.re_step());

    if (maxima.size() >= 2) {
        // Dip between the two largest maxima.
        std::vector<Index> by_height = maxima;
        std::sort(by_height.begin(), by_height.end(),
                  [&](Index a, Index b) { return slice(a) > slice(b); });
        Index lo = std::min(by_height[0], by_height[1]);
        Index hi = std::max(by_height[0], by_height[1]);
        double dip = slice.segment(lo, hi - lo + 1).minCoeff();
        const double ref = std::min(slice(lo), slice(hi));
        if (ref > 0.0) s.dip_ratio = 1.0 - dip / ref;
    }
    return s;
}

} // namespace qom
