#include "support.hpp"

#include "rabicat/linalg.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rabicat;

namespace {

CMatrix random_hermitian(Eigen::Index n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    CMatrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = cplx(dist(rng), dist(rng));
    return 0.5 * (a + a.adjoint());
}

SpectralBounds gershgorin(const CMatrix& a) {
    SpectralBounds b{1e300, -1e300};
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double r = a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
        b.lo = std::min(b.lo, a(i, i).real() - r);
        b.hi = std::max(b.hi, a(i, i).real() + r);
    }
    return b;
}

} // namespace

TEST_CASE("bessel sequence matches the standard library") {
    for (double x : {0.1, 1.0, 7.5, 40.0, 250.0}) {
        const auto j = bessel_j_sequence(x, 60);
        for (int k = 0; k <= 60; ++k) {
            CHECK(j[k] == doctest::Approx(std::cyl_bessel_j(double(k), x)).epsilon(1e-10).scale(1.0));
        }
    }
    CHECK(bessel_j_sequence(0.0, 3)[0] == 1.0);
    CHECK_THROWS_AS(bessel_j_sequence(-1.0, 3), std::invalid_argument);
}

TEST_CASE("expm agrees with a Taylor series") {
    const CMatrix h = random_hermitian(12, 3);
    const CMatrix a = -kI * 0.7 * h;
    CHECK(max_abs(expm(a) - test::taylor_expm(a)) < 1e-11);
}

TEST_CASE("exp_i_hermitian is exp(i s K)") {
    const CMatrix k = random_hermitian(10, 5);
    const CMatrix u = exp_i_hermitian(k, 0.35);
    CHECK(max_abs(u - test::taylor_expm(kI * 0.35 * k)) < 1e-11);
    CHECK(max_abs(u.adjoint() * u - CMatrix::Identity(10, 10)) < 1e-13);
}

TEST_CASE("chebyshev action equals the dense exponential") {
    const CMatrix h = random_hermitian(20, 11);
    const auto bounds = gershgorin(h);
    auto op = [&](const CMatrix& in, CMatrix& out) { out = h * in; };
    for (double tau : {0.01, 0.5, 3.0, -1.2}) {
        const ChebyshevExpansion cheb(bounds, tau);
        CMatrix v = CMatrix::Identity(20, 3);
        cheb.apply(op, v);
        const CMatrix ref = test::taylor_expm(-kI * tau * h).leftCols(3);
        CHECK(max_abs(v - ref) < 1e-11);
    }
}

TEST_CASE("chebyshev with a degenerate interval is a phase") {
    const ChebyshevExpansion cheb({2.0, 2.0}, 0.3);
    CHECK(cheb.terms() == 1);
    CVector v = CVector::Ones(4);
    cheb.apply([](const CVector& in, CVector& out) { out = 2.0 * in; }, v);
    CHECK(std::abs(v(0) - std::exp(-kI * 0.6)) < 1e-15);
    CHECK_THROWS_AS(ChebyshevExpansion({1.0, 0.0}, 1.0), std::invalid_argument);
}
