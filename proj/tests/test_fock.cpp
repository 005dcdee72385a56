#include "support.hpp"

#include "rabicat/errors.hpp"
#include "rabicat/fock.hpp"

#include <doctest.h>

#include <cmath>

using namespace rabicat;

namespace {

// Coherent amplitudes from the power series, no shared code with the library.
CVector coherent_series(cplx alpha, int dim) {
    CVector c(dim);
    for (int n = 0; n < dim; ++n) {
        c(n) = std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::sqrt(test::factorial(n));
    }
    return c;
}

double number_expectation(const CVector& v) {
    double s = 0.0;
    for (Eigen::Index n = 0; n < v.size(); ++n) s += static_cast<double>(n) * std::norm(v(n));
    return s;
}

} // namespace

TEST_CASE("ladder operators") {
    const auto l2 = fock::ladder(2);
    CHECK(std::abs(l2.annihilation.entries(0, 1) - 1.0) < 1e-15);
    CHECK(std::abs(l2.annihilation.entries(1, 0)) == 0.0);

    const auto l = fock::ladder(7);
    const CMatrix a = l.annihilation.entries;
    const CMatrix ad = l.creation.entries;
    CHECK(max_abs(ad - a.adjoint()) == 0.0);
    for (int n = 1; n < 7; ++n) CHECK(a(n - 1, n).real() == doctest::Approx(std::sqrt(n)));

    const CMatrix number = ad * a;
    for (int n = 0; n < 7; ++n) CHECK(number(n, n).real() == doctest::Approx(n));

    // Direct multiplication: identity except 1 - dim in the last entry.
    CMatrix expected = CMatrix::Identity(7, 7);
    expected(6, 6) = 1.0 - 7.0;
    CHECK(max_abs(a * ad - ad * a - expected) < 1e-12);

    CHECK_THROWS_AS(fock::ladder(1), InvalidDimension);
}

TEST_CASE("displacement") {
    test::WarningCapture quiet;
    CHECK(max_abs(fock::displacement(0.0, 8).entries - CMatrix::Identity(8, 8)) < 1e-15);

    const auto d1 = fock::displacement(1.0, 64).entries;
    CHECK(d1(0, 0).real() == doctest::Approx(0.6065306597).epsilon(1e-9));
    CHECK(std::abs(d1(0, 0) - std::exp(-0.5)) < 1e-12);
    // Column 0 is the coherent state.
    CHECK((d1.col(0) - coherent_series(1.0, 64)).norm() < 1e-12);

    const cplx alpha(2.1, -1.3);
    const auto d = fock::displacement(alpha, 64).entries;
    const auto dm = fock::displacement(-alpha, 64).entries;
    CHECK(max_abs(d * dm - CMatrix::Identity(64, 64)) < 1e-10);
    CHECK(max_abs(d * d.adjoint() - CMatrix::Identity(64, 64)) < 1e-9);

    // Independent Taylor exponential of the generator.
    const auto lad = fock::ladder(64);
    const CMatrix gen = alpha * lad.creation.entries - std::conj(alpha) * lad.annihilation.entries;
    CHECK(max_abs(d - test::taylor_expm(gen)) < 1e-10);
    CHECK(quiet.messages.empty());
}

TEST_CASE("displacement composition carries the expected phase") {
    const cplx a(0.8, 0.4);
    const cplx b(-1.1, 0.9);
    const auto da = fock::displacement(a, 80).entries;
    const auto db = fock::displacement(b, 80).entries;
    const auto dab = fock::displacement(a + b, 80).entries;
    const cplx phase = std::exp(kI * std::imag(a * std::conj(b)));
    // Compare on the low-lying block where truncation cannot reach.
    CHECK(max_abs((da * db - phase * dab).topLeftCorner(40, 40)) < 1e-9);
}

TEST_CASE("displace matches the dense operator") {
    const cplx alpha(-1.7, 2.2);
    const auto dense = fock::displacement(alpha, 96).entries;
    const CMatrix block = CMatrix::Identity(96, 5);
    CHECK(max_abs(fock::displace(alpha, block) - dense.leftCols(5)) < 1e-11);
    CVector v = CVector::Zero(96);
    v(3) = 1.0;
    CHECK((fock::displace(alpha, v) - dense.col(3)).norm() < 1e-11);
}

TEST_CASE("displacement warns when the amplitude outgrows the truncation") {
    test::WarningCapture capture;
    fock::displacement(3.0, 16);
    CHECK(capture.messages.size() == 1);
}

TEST_CASE("coherent states") {
    const auto vac = fock::coherent_state(0.0, 10);
    CHECK(std::abs(vac.amplitudes(0) - 1.0) < 1e-15);
    CHECK(vac.amplitudes.tail(9).norm() == 0.0);

    const auto c2 = fock::coherent_state(2.0, 64);
    CHECK(number_expectation(c2.amplitudes) == doctest::Approx(4.0).epsilon(1e-8));
    CHECK((c2.amplitudes - coherent_series(2.0, 64)).norm() < 1e-12);
    CHECK(c2.norm() == doctest::Approx(1.0).epsilon(1e-12));

    const auto p = fock::coherent_state(1.0, 64);
    const auto m = fock::coherent_state(-1.0, 64);
    CHECK(std::norm(p.amplitudes.dot(m.amplitudes)) == doctest::Approx(std::exp(-4.0)).epsilon(1e-12));

    const cplx z(1.5, -0.5);
    CHECK(number_expectation(fock::coherent_state(z, 64).amplitudes) ==
          doctest::Approx(std::norm(z)).epsilon(1e-8));

    test::WarningCapture capture;
    const auto big = fock::coherent_state(4.0, 16);
    CHECK(capture.messages.size() == 1);
    CHECK(big.leakage > 1e-8);
}

TEST_CASE("cat states") {
    const auto zero = fock::cat_state(0.0, +1, 8);
    CHECK(std::abs(std::abs(zero.amplitudes(0)) - 1.0) < 1e-15);
    CHECK_THROWS_AS(fock::cat_state(0.0, -1, 8), NullStateError);

    // Unnormalized |-a> + |a> has squared norm 2(1 + e^{-2|a|^2}).
    const double a = 0.833;
    const CVector sum = coherent_series(-a, 64) + coherent_series(a, 64);
    CHECK(sum.norm() == doctest::Approx(std::sqrt(2.0 * (1.0 + std::exp(-2.0 * a * a)))).epsilon(1e-12));
    CHECK(1.0 + std::exp(-2.0 * a * a) == doctest::Approx(1.24963).epsilon(1e-5));
    CHECK((fock::cat_state(a, +1, 64).amplitudes - sum / sum.norm()).norm() < 1e-12);

    for (cplx alpha : {cplx(0.05), cplx(0.833), cplx(1.0, 2.0), cplx(-2.5, 0.3)}) {
        const auto even = fock::cat_state(alpha, +1, 64);
        const auto odd = fock::cat_state(alpha, -1, 64);
        CHECK(std::abs(even.amplitudes.dot(odd.amplitudes)) < 1e-10);
        CHECK(even.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(fock::cat_state(1.0, 2, 8), std::invalid_argument);
}

TEST_CASE("tensor assembly") {
    const auto vac = fock::coherent_state(0.0, 6);
    const auto plus = fock::tensor_qubit(vac, {1.0, 0.0});
    CHECK(plus.dim() == 12);
    CHECK(plus.norm() == doctest::Approx(1.0));
    CHECK(std::abs(plus.amplitudes(0) - 1.0) < 1e-15);

    const double r = 1.0 / std::sqrt(2.0);
    const auto mixed = fock::tensor_qubit(vac, {r, r});
    CHECK(mixed.branch(0).squaredNorm() == doctest::Approx(0.5));
    CHECK(std::abs(mixed.branch(0)(0) - r) < 1e-15);

    // Displaced-Fock pair: |+> D(-b)|N> + s |-> D(b)|N> has squared norm
    // 2 (1 + s Re<D(b)N|D(-b)N>) once both branches are projected onto
    // the single qubit state (|+> + |->)/sqrt(2) and recombined.
    const cplx beta(0.6, 0.4);
    CVector n2 = CVector::Zero(48);
    n2(2) = 1.0;
    const CVector u = fock::displace(-beta, n2);
    const CVector v = fock::displace(beta, n2);
    for (int s : {+1, -1}) {
        const auto st = fock::tensor_branches(u, s * v);
        CHECK(st.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
        const CVector folded = st.branch(0) + st.branch(1);
        CHECK(folded.squaredNorm() ==
              doctest::Approx(2.0 * (1.0 + s * v.dot(u).real())).epsilon(1e-12));
    }
}

TEST_CASE("sizing rule") {
    CHECK(fock::recommended_dim(0.0) == 32);
    CHECK(fock::recommended_dim(5.3) == 128);
    CHECK(fock::recommended_dim(10.5) == 256);
    CHECK(fock::coherent_tail(2.0, 64) < 1e-12);
}

TEST_CASE("reused displacer composes like repeated displacements") {
    const std::size_t dim = 40;
    const cplx step(0.15, -0.05);
    const fock::Displacer d(step, dim);
    CMatrix v = fock::coherent_state(0.0, dim).amplitudes;
    for (int k = 0; k < 8; ++k) d.apply(v);
    // Displacements along a common direction commute without phase.
    const auto expect = fock::coherent_state(8.0 * step, dim);
    CHECK((v.col(0) - expect.amplitudes).norm() < 1e-12);
    CMatrix wrong(dim + 1, 1);
    CHECK_THROWS_AS(d.apply(wrong), InvalidDimension);
}
