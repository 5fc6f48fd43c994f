#include "qom/hypergeometric.hpp"

#include <cmath>
#include <sstream>

namespace qom {

namespace {

bool is_nonpositive_integer(std::complex<double> c) {
    if (std::abs(c.imag()) > 1e-14) return false;
    const double r = std::round(c.real());
    return r <= 0.0 && std::abs(c.real() - r) < 1e-14 * std::max(1.0, std::abs(c.real()));
}

} // namespace

Hyp2f1Result hyp2f1_detailed(std::complex<double> a, std::complex<double> b,
                             std::complex<double> c, double z, double rel_tol, long max_terms) {
    if (is_nonpositive_integer(c))
        throw PoleError("2F1 pole: c is a non-positive integer");
    if (!(z >= 0.0) || z >= 1.0 || !std::isfinite(z))
        throw NumericDomainError("2F1 series implemented for real z in [0, 1)");
    for (std::complex<double> w : {a, b, c})
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
            throw NumericDomainError("2F1 parameters must be finite");

    Hyp2f1Result res;
    if (z == 0.0) {
        res.value = 1.0;
        res.terms = 1;
        res.converged = true;
        return res;
    }

    // Terms can grow while (a+k), (b+k) or (c+k) sweeps negative real parts;
    // the geometric tail bound below is valid only beyond that turning point.
    const long k_turn =
        static_cast<long>(std::ceil(std::max({0.0, -a.real(), -b.real(), -c.real()}))) + 2;
    // For j >= k >= k_turn:
    //   |(a+j)/(1+j)| <= 1 + ca/(1+k),    ca = |Im a| + max(0, Re a - 1)
    //   |(b+j)/(c+j)| <= 1 + |b-c|/|c+k|
    const double ca = std::abs(a.imag()) + std::max(0.0, a.real() - 1.0);
    const double bc = std::abs(b - c);

    std::complex<double> sum = 0.0;
    std::complex<double> term = 1.0;
    long k = 0;
    while (k < max_terms) {
        sum += term;
        const std::complex<double> ratio =
            (a + static_cast<double>(k)) * (b + static_cast<double>(k)) /
            ((c + static_cast<double>(k)) * (1.0 + static_cast<double>(k)));
        term *= ratio * z;
        ++k;
        if (term == std::complex<double>(0.0, 0.0)) {  // terminating (polynomial) case
            res.tail_bound = 0.0;
            res.converged = true;
            break;
        }
        if (k >= k_turn) {
            const double q = z * (1.0 + ca / (1.0 + static_cast<double>(k))) *
                             (1.0 + bc / std::abs(c + static_cast<double>(k)));
            if (q < 1.0) {
                const double tail = std::abs(term) * q / (1.0 - q);
                if (tail + std::abs(term) <= rel_tol * std::abs(sum)) {
                    sum += term;
                    res.tail_bound = tail;
                    res.converged = true;
                    break;
                }
            }
        }
    }
    res.value = sum;
    res.terms = k;
    if (!res.converged) {
        std::ostringstream os;
        os << "2F1 series did not reach tolerance " << rel_tol << " within " << max_terms
           << " terms (|last term| = " << std::abs(term) << ", |partial sum| = " << std::abs(sum)
           << ")";
        throw ConvergenceError(os.str(), k, std::abs(term));
    }
    return res;
}

std::complex<double> hyp2f1(std::complex<double> a, std::complex<double> b,
                            std::complex<double> c, double z) {
    return hyp2f1_detailed(a, b, c, z).value;
}

} // namespace qom
