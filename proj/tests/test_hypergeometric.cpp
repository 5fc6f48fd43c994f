#include "doctest.h"

#include <cmath>
#include <complex>

#include "qom/hypergeometric.hpp"

using namespace qom;
using std::complex;

TEST_CASE("2F1 at z = 0 is 1 for any parameters") {
    const Hyp2f1Result r = hyp2f1_detailed({2.3, -1.1}, {-7.0, 0.4}, {0.5, 3.0}, 0.0);
    CHECK(r.value == complex<double>(1.0, 0.0));
    CHECK(r.converged);
}

TEST_CASE("2F1(1,1;2;z) = -log(1-z)/z (classical identity)") {
    const double z = 0.5;
    const complex<double> v = hyp2f1(1.0, 1.0, 2.0, z);
    CHECK(std::abs(v - (-std::log1p(-z) / z)) < 1e-12);
    CHECK(std::abs(v.real() - 2.0 * std::log(2.0)) < 1e-12);

    // second point deep in the slowly convergent region
    const double z2 = 0.97;
    CHECK(std::abs(hyp2f1(1.0, 1.0, 2.0, z2) - (-std::log1p(-z2) / z2)) < 1e-11);
}

TEST_CASE("2F1 terminating polynomial case (a a non-positive integer)") {
    // 2F1(-3, 2; 4; 1/2) = 1 - 3/4 + 9/40 - 1/40 = 0.45
    const complex<double> v = hyp2f1(-3.0, 2.0, 4.0, 0.5);
    CHECK(std::abs(v - complex<double>(0.45, 0.0)) < 1e-14);
}

TEST_CASE("2F1 pole and domain errors") {
    CHECK_THROWS_AS(hyp2f1(1.0, 2.0, 0.0, 0.3), PoleError);
    CHECK_THROWS_AS(hyp2f1(1.0, 2.0, -3.0, 0.3), PoleError);
    CHECK_NOTHROW(hyp2f1(1.0, 2.0, -2.5, 0.3));
    CHECK_NOTHROW(hyp2f1(1.0, 2.0, {-3.0, 0.5}, 0.3));
    CHECK_THROWS_AS(hyp2f1(1.0, 2.0, 3.0, 1.0), NumericDomainError);
    CHECK_THROWS_AS(hyp2f1(1.0, 2.0, 3.0, -0.2), NumericDomainError);
}

TEST_CASE("2F1 reports non-convergence with diagnostics at a tiny term cap") {
    CHECK_THROWS_AS(hyp2f1_detailed(1.0, 1.0, 2.0, 0.99, 1e-12, 10), ConvergenceError);
    try {
        hyp2f1_detailed(1.0, 1.0, 2.0, 0.99, 1e-12, 10);
    } catch (const ConvergenceError& e) {
        CHECK(e.iterations == 10);
        CHECK(e.partial_error > 0.0);
    }
}

TEST_CASE("2F1 with the thermal-transmission parameter shape") {
    // b = -(i kappa + 2 delta)/(4g); the family has c = b + 1 and z -> 1
    const double g = 1e-3, kappa = 1.0, delta = 0.7, nbar = 100.0;
    const double z = nbar / (nbar + 1.0);
    const complex<double> b = -complex<double>(2.0 * delta, kappa) / (4.0 * g);
    const Hyp2f1Result r = hyp2f1_detailed(1.0, b, b + 1.0, z);
    CHECK(r.converged);
    CHECK(r.tail_bound < 1e-10 * std::abs(r.value));

    // oracle: direct weighted Lorentzian sum 2F1(1,b;b+1;z) = sum_n b/(b+n) z^n
    complex<double> direct = 0.0;
    double w = 1.0;
    for (long n = 0; n < 4000; ++n) {
        direct += w * b / (b + static_cast<double>(n));
        w *= z;
    }
    CHECK(std::abs(r.value - direct) / std::abs(direct) < 1e-6);
}
