#ifndef QOM_PHASE_SPACE_HPP
#define QOM_PHASE_SPACE_HPP

#include <vector>

#include "qom/closed_system.hpp"
#include "qom/fock.hpp"

namespace qom {

struct QGridSpec {
    double re_min = -6.0;
    double re_max = 6.0;
    double im_min = -6.0;
    double im_max = 6.0;
    Index re_points = 201;
    Index im_points = 201;

    static QGridSpec centered(double half_width, Index points = 201);
    double re_step() const;
    double im_step() const;
};

/// Husimi Q sampled on a rectangular grid: values(j, i) = Q(re_i + i im_j),
/// rows scan Im(alpha), columns scan Re(alpha), both ascending.
struct QGrid {
    QGridSpec spec;
    Eigen::MatrixXd values;
    /// Riemann mass captured by the window (integral estimate of Q).
    double normalization = 0.0;
    /// Set when the window captures less than 95% of the state's mass.
    bool window_warning = false;

    double cell_area() const;
};

/// Q(alpha) = <alpha| rho |alpha> / pi for a single-mode state.
QGrid husimi_q(const QuantumState& state, const QGridSpec& spec);

/// Q of the statistical mixture (|i beta><i beta| + |-i beta><-i beta|)/2:
/// (exp(-|alpha - i beta|^2) + exp(-|alpha + i beta|^2)) / (2 pi).
QGrid mixture_q(Complex beta, const QGridSpec& spec);

struct Snapshot {
    double time = 0.0;
    double time_effective = 0.0;
    QGrid grid;
    Eigen::VectorXd photon_marginal;
    double phonon_purity = 0.0;
    double var_x = 0.0;
    double var_p = 0.0;
};

struct SnapshotOptions {
    QGridSpec grid;
    /// Widen the window until it captures at least 99% of the state mass.
    bool auto_widen = true;
    /// Mean photon number defining the effective period 2π/ϖ(n̄);
    /// negative: use the photon spec's mean occupation.
    double effective_nbar = -1.0;
};

/// Mechanical-state snapshots: for each time (in units of the effective
/// period) evolve the joint state, reduce to the phonon mode and sample Q.
std::vector<Snapshot> snapshot_series(const SystemParams& params, const StateSpec& photon_spec,
                                      const StateSpec& phonon_spec,
                                      const std::vector<double>& times_in_effective_periods,
                                      const SnapshotOptions& opts = {});

/// 2π/ϖ(n̄) with ϖ the dressed frequency at mean photon number n̄.
double effective_period(const SystemParams& params, double nbar);

/// Structure of the Q slice along Im(alpha) = 0: local maxima (above 2% of
/// the slice maximum) and the relative depth of the dip between the two
/// largest maxima (0 when fewer than two).
struct SliceStructure {
    int maxima_count = 0;
    std::vector<double> maxima_positions;
    double dip_ratio = 0.0;
};

SliceStructure real_axis_structure(const QGrid& grid);

} // namespace qom

#endif // QOM_PHASE_SPACE_HPP
