#ifndef QOM_HYPERGEOMETRIC_HPP
#define QOM_HYPERGEOMETRIC_HPP

#include <complex>

#include "qom/errors.hpp"

namespace qom {

struct Hyp2f1Result {
    std::complex<double> value{0.0, 0.0};
    long terms = 0;
    double tail_bound = 0.0;
    bool converged = false;
};

/// Gauss hypergeometric series  2F1(a, b; c; z) = Σ_k (a)_k (b)_k / (c)_k z^k / k!
/// for real z in [0, 1), summed to relative tolerance with an a-posteriori
/// geometric tail bound. Throws PoleError when c is a non-positive integer and
/// ConvergenceError (with partial-sum diagnostics) when the cap is reached.
Hyp2f1Result hyp2f1_detailed(std::complex<double> a, std::complex<double> b,
                             std::complex<double> c, double z, double rel_tol = 1e-12,
                             long max_terms = 20000000);

std::complex<double> hyp2f1(std::complex<double> a, std::complex<double> b,
                            std::complex<double> c, double z);

} // namespace qom

#endif // QOM_HYPERGEOMETRIC_HPP
