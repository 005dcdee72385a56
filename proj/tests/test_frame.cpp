#include "support.hpp"

#include "rabicat/errors.hpp"
#include "rabicat/fock.hpp"
#include "rabicat/frame.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

using namespace rabicat;
using model::Axis;

namespace {

constexpr double kT = 2.0 * M_PI;

// RK4 on dg~/dt = i (g_eff(t) - g~) with omega = 1, g_eff including pulse signs.
cplx rk4_gtilde(const std::function<double(double)>& g, cplx y, double t0, double t1,
                std::size_t steps) {
    const double h = (t1 - t0) / static_cast<double>(steps);
    auto f = [&](double t, cplx v) { return kI * (g(t) - v); };
    double t = t0;
    for (std::size_t k = 0; k < steps; ++k) {
        const cplx k1 = f(t, y);
        const cplx k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
        const cplx k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
        const cplx k4 = f(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }
    return y;
}

model::Schedule single(double t_end, model::Waveform g, model::Waveform delta = model::Constant{0.0}) {
    model::Schedule s;
    s.segments.push_back({0.0, t_end, g, delta});
    return s;
}

// <m|D(a)|n> from the associated Laguerre closed form.
cplx displacement_element(int m, int n, cplx a) {
    const double x = std::norm(a);
    if (m >= n) {
        return std::sqrt(test::factorial(n) / test::factorial(m)) * std::pow(a, m - n) *
               std::exp(-0.5 * x) * std::assoc_laguerre(n, m - n, x);
    }
    return std::sqrt(test::factorial(m) / test::factorial(n)) * std::pow(-std::conj(a), n - m) *
           std::exp(-0.5 * x) * std::assoc_laguerre(m, n - m, x);
}

} // namespace

TEST_CASE("gtilde closed forms agree with RK4") {
    const cplx y0(0.3, -0.2);
    struct Case {
        model::Waveform w;
        double t0, t1, seg0, seg1;
    };
    const std::vector<Case> cases{
        {model::Constant{0.7}, 0.4, 5.1, 0.0, 6.0},
        {model::Linear{0.9, -0.4}, 1.0, 3.7, 0.5, 4.0},
        {model::Cosine{0.8, 1.0, 0.0}, 0.0, 2.0 * kT, 0.0, 2.0 * kT},
        {model::Cosine{0.8, 1.0, 0.3}, 1.3, 9.0, 0.0, 10.0},
        {model::Cosine{0.5, 2.5, -1.0}, 0.2, 7.0, 0.0, 8.0},
        {model::Cosine{0.5, 1.0 + 1e-9, 0.0}, 0.0, 6.0, 0.0, 8.0},
    };
    for (const auto& c : cases) {
        for (double sign : {1.0, -1.0}) {
            auto g = [&](double t) { return sign * model::evaluate(c.w, t, c.seg0, c.seg1); };
            const cplx ref = rk4_gtilde(g, y0, c.t0, c.t1, 200000);
            const cplx got = frame::gtilde_step(c.w, c.seg0, c.seg1, c.t0, c.t1, y0, 1.0, sign);
            CHECK(std::abs(got - ref) < 1e-10);
        }
    }
}

TEST_CASE("gtilde with a non-unit oscillator frequency") {
    const double omega = 2.5;
    const model::Waveform w = model::Cosine{0.4, omega, 0.0};
    const cplx got = frame::gtilde_step(w, 0.0, 3.0, 0.0, 3.0, 0.4, omega);
    // Closed form in scaled time: g0 e^{-i w t} (1 + i w t / 2 + (e^{2 i w t} - 1) / 4).
    const double wt = omega * 3.0;
    const cplx ref = 0.4 * std::exp(-kI * wt) * (1.0 + kI * wt / 2.0 + (std::exp(2.0 * kI * wt) - 1.0) / 4.0);
    CHECK(std::abs(got - ref) < 1e-12);
}

TEST_CASE("fixed point and free rotation") {
    CHECK(std::abs(frame::gtilde_step(model::Constant{0.6}, 0, 10, 0.0, 7.3, 0.6, 1.0) - 0.6) < 1e-15);
    const cplx g0(0.5, 0.1);
    CHECK(std::abs(frame::gtilde_step(model::Constant{0.0}, 0, 10, 1.0, 3.2, g0, 1.0) -
                   g0 * std::exp(-kI * 2.2)) < 1e-15);
}

TEST_CASE("sinusoidal amplification factors") {
    const double g0 = 0.833;
    auto s = single(4.0 * kT, model::Cosine{g0, 1.0, 0.0});
    const auto traj = frame::gtilde_trajectory(s, g0, {2.0 * kT, 4.0 * kT});
    CHECK(std::abs(traj[0].gtilde / g0) == doctest::Approx(std::sqrt(1.0 + 4.0 * M_PI * M_PI)).epsilon(1e-12));
    CHECK(std::abs(traj[0].gtilde / g0) == doctest::Approx(6.36227).epsilon(1e-6));
    CHECK(std::round(10.0 * std::abs(traj[0].gtilde / g0)) == 64.0);
    CHECK(std::abs(traj[0].gtilde - g0 * cplx(1.0, 2.0 * M_PI)) < 1e-12);
    CHECK(std::abs(traj[0].gtilde) == doctest::Approx(5.30).epsilon(2e-3));
    CHECK(std::abs(traj[1].gtilde) == doctest::Approx(g0 * std::sqrt(1.0 + 16.0 * M_PI * M_PI)).epsilon(1e-12));
    CHECK(std::abs(traj[1].gtilde) == doctest::Approx(10.5).epsilon(5e-3));

    // Closed form at arbitrary times.
    for (double t : {0.3, 1.7, 5.0, 11.1}) {
        const cplx ref = std::exp(-kI * t) * g0 * (1.0 + kI * t / 2.0 + (std::exp(2.0 * kI * t) - 1.0) / 4.0);
        CHECK(std::abs(frame::frame_at(s, g0, t).gtilde - ref) < 1e-12);
    }
}

TEST_CASE("resonant growth is linear in periods") {
    const double g0 = 0.2;
    auto s = single(8.0 * kT, model::Cosine{g0, 1.0, 0.0});
    std::vector<double> times;
    for (int n = 1; n <= 8; ++n) times.push_back(n * kT);
    const auto traj = frame::gtilde_trajectory(s, g0, times);
    Eigen::MatrixXd design(8, 3);
    Eigen::VectorXd y(8);
    for (int n = 1; n <= 8; ++n) {
        CHECK(std::abs(traj[n - 1].gtilde - g0) == doctest::Approx(g0 * M_PI * n).epsilon(1e-12));
        design.row(n - 1) << 1.0, n, double(n) * n;
        y(n - 1) = std::norm(traj[n - 1].gtilde);
    }
    const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(y);
    const double ss_res = (design * coef - y).squaredNorm();
    const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
    CHECK(1.0 - ss_res / ss_tot > 0.9999);
}

TEST_CASE("pulse train recurrence") {
    const double g0 = 0.1;
    auto s = single(5.0 * kT, model::Constant{g0});
    for (int k = 0; k < 10; ++k) s.pulses.push_back({0.5 * k * kT, Axis::z});
    std::vector<double> halves;
    for (int k = 1; k <= 10; ++k) halves.push_back(0.5 * k * kT);
    const auto traj = frame::gtilde_trajectory(s, g0, halves);
    cplx rec = g0;
    for (int k = 0; k < 10; ++k) {
        const double geff = (k % 2 == 0) ? -g0 : g0;
        rec = 2.0 * geff - rec;
        CHECK(std::abs(traj[k].gtilde - rec) < 1e-12);
    }
    CHECK(std::abs(traj.back().gtilde) == doctest::Approx(2.1).epsilon(1e-12));

    // Same train without the pulse at t = 0.
    s.pulses.erase(s.pulses.begin());
    s.pulses.push_back({4.5 * kT + 0.0, Axis::z});
    s.pulses.pop_back();
    CHECK(std::abs(frame::frame_at(s, g0, 5.0 * kT).gtilde) == doctest::Approx(1.9).epsilon(1e-12));

    // sigma_x pulses never flip g.
    auto sx = single(3.0 * kT, model::Constant{g0});
    sx.pulses = {{0.0, Axis::x}, {0.5 * kT, Axis::x}};
    CHECK(std::abs(frame::frame_at(sx, g0, 3.0 * kT).gtilde - g0) < 1e-15);
}

TEST_CASE("trajectories are continuous across pulses and jumps") {
    model::Schedule s;
    s.segments.push_back({0.0, 1.0, model::Constant{0.5}, model::Constant{0.0}});
    s.segments.push_back({1.0, 3.0, model::Constant{-0.2}, model::Constant{0.0}});
    s.pulses.push_back({2.0, Axis::z});
    for (double t : {1.0, 2.0}) {
        const cplx lo = frame::frame_at(s, 0.5, t - 1e-9).gtilde;
        const cplx hi = frame::frame_at(s, 0.5, t + 1e-9).gtilde;
        CHECK(std::abs(lo - hi) < 1e-8);
    }
    auto f = frame::frame_at(s, 0.5, 2.5);
    CHECK(f.signs.g == -1);
    CHECK_THROWS_AS(frame::gtilde_trajectory(s, 0.5, {2.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(frame::gtilde_trajectory(s, 0.5, {4.0}), std::out_of_range);
}

TEST_CASE("adiabatic ramp tracks g") {
    const double g0 = 0.833;
    auto s = single(50.0 * kT, model::Linear{g0, 0.0});
    std::vector<double> times;
    for (int k = 0; k <= 500; ++k) times.push_back(50.0 * kT * k / 500.0);
    const auto traj = frame::gtilde_trajectory(s, g0, times);
    double worst = 0.0;
    for (const auto& f : traj) worst = std::max(worst, std::abs(f.gtilde - s.g_at(f.time)));
    CHECK(worst < 0.02 * g0);
}

TEST_CASE("quench traces a circle about the origin") {
    model::Schedule s;
    s.segments.push_back({0.0, 1.0, model::Constant{0.6}, model::Constant{0.0}});
    s.segments.push_back({1.0, 1.0 + kT, model::Constant{0.0}, model::Constant{0.0}});
    for (double t : {1.5, 2.5, 4.0, 6.5}) {
        CHECK(std::abs(frame::frame_at(s, 0.6, t).gtilde) == doctest::Approx(0.6).epsilon(1e-14));
    }
}

TEST_CASE("gtilde obeys superposition") {
    const double te = 3.0 * kT;
    auto sa = single(te, model::Cosine{0.3, 1.0, 0.2});
    auto sb = single(te, model::Linear{0.1, 0.5});
    const cplx ga(0.3, 0.1);
    const cplx gb(-0.2, 0.4);
    for (double t : {1.0, 7.0, te}) {
        const cplx sum = frame::frame_at(sa, ga, t).gtilde + frame::frame_at(sb, gb, t).gtilde;
        auto g = [&](double s) { return sa.g_at(s) + sb.g_at(s); };
        const cplx joint = rk4_gtilde(g, ga + gb, 0.0, t, 200000);
        CHECK(std::abs(sum - joint) < 1e-10);
    }
}

TEST_CASE("global phase integral") {
    // Constant g at the fixed point: phi = (g^2 - omega^2 / 2) t.
    auto s = single(3.0, model::Constant{0.7});
    CHECK(frame::frame_at(s, 0.7, 3.0).phi_global == doctest::Approx((0.49 - 0.5) * 3.0).epsilon(1e-13));
    // Off the fixed point, g Re(g~) integrates in closed form.
    const cplx y0(0.2, 0.3);
    const double t = 2.3;
    const double expected = 0.7 * (0.7 * t + std::real((y0 - 0.7) * kI * (std::exp(-kI * t) - 1.0))) - 0.5 * t;
    CHECK(frame::frame_at(s, y0, t).phi_global == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("dynamical eigenstates") {
    const auto e0 = frame::dynamical_eigenstate(0.0, 0, +1, 8);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(e0.amplitudes(0) - r) < 1e-15);
    CHECK(std::abs(e0.amplitudes(8) - r) < 1e-15);

    const cplx gt(0.6, -0.9);
    const auto g0p = frame::dynamical_eigenstate(gt, 0, +1, 64);
    CHECK((g0p.branch(0) - r * fock::coherent_state(-gt, 64).amplitudes).norm() < 1e-12);
    CHECK((g0p.branch(1) - r * fock::coherent_state(gt, 64).amplitudes).norm() < 1e-12);

    std::vector<SystemState> states;
    for (int n = 0; n < 4; ++n)
        for (int b : {+1, -1}) states.push_back(frame::dynamical_eigenstate(gt, n, b, 64));
    for (std::size_t i = 0; i < states.size(); ++i) {
        CHECK(states[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t j = 0; j < i; ++j) {
            CHECK(std::abs(states[i].amplitudes.dot(states[j].amplitudes)) < 1e-10);
        }
    }
    CHECK_THROWS_AS(frame::dynamical_eigenstate(gt, 0, 0, 64), std::invalid_argument);
    CHECK_THROWS_AS(frame::dynamical_eigenstate(gt, 64, 1, 64), InvalidDimension);

    test::WarningCapture capture;
    frame::dynamical_eigenstate(5.0, 0, +1, 16);
    CHECK_FALSE(capture.messages.empty());
}

TEST_CASE("sigma_z matrix") {
    const auto m0 = frame::sigma_z_matrix(0.0, 1.3, 6, 16);
    CMatrix expected = CMatrix::Zero(12, 12);
    expected.topLeftCorner(6, 6).setIdentity();
    expected.bottomRightCorner(6, 6) = -CMatrix::Identity(6, 6);
    CHECK(max_abs(m0.full - expected) < 1e-14);

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 4; ++trial) {
        cplx gt(u(rng), u(rng));
        while (std::abs(gt) > 3.0) gt *= 0.9;
        const double t = u(rng);
        const auto m = frame::sigma_z_matrix(gt, t, 8, 96);
        CHECK(max_abs(m.full - m.full.adjoint()) < 1e-10);

        // Brute force <b_j| sigma_z |b_k> with the assembled basis.
        const CMatrix b = frame::frame_basis(gt, t, 8, 96);
        CMatrix sz = CMatrix::Zero(192, 192);
        sz.topRightCorner(96, 96).setIdentity();
        sz.bottomLeftCorner(96, 96).setIdentity();
        CHECK(max_abs(b.adjoint() * sz * b - m.full) < 1e-12);

        // Closed form: (1/2) [s <N'|D(2b)|N> + s' conj(<N|D(2b)|N'>)] e^{-i (N - N') t}.
        for (int np = 0; np < 3; ++np) {
            for (int n = 0; n < 3; ++n) {
                for (int sp : {1, -1}) {
                    for (int s : {1, -1}) {
                        const cplx d = displacement_element(np, n, 2.0 * gt);
                        const cplx dt = std::conj(displacement_element(n, np, 2.0 * gt));
                        const cplx ref = 0.5 * (double(s) * d + double(sp) * dt) *
                                         std::exp(-kI * double(n - np) * t);
                        const cplx got = m.block(sp, s)(np, n);
                        CHECK(std::abs(got - ref) < 1e-11);
                    }
                }
            }
        }
        CHECK(std::abs(m.block(1, 1)(0, 0) - std::exp(-2.0 * std::norm(gt))) < 1e-12);
    }
}

TEST_CASE("frame expansion round trip") {
    const cplx gt(0.8, 0.3);
    const auto e = frame::dynamical_eigenstate(gt, 0, +1, 64);
    const auto c = frame::expand_in_frame(e, gt, 0.0, 32);
    CHECK(std::abs(c.coeffs(0) - 1.0) < 1e-12);
    CHECK(c.coeffs.tail(63).norm() < 1e-12);

    std::mt19937 rng(1);
    std::normal_distribution<double> nd;
    CVector coeffs(64);
    for (auto& x : coeffs) x = cplx(nd(rng), nd(rng));
    coeffs.normalize();
    const auto st = frame::reassemble(coeffs, gt, 2.1, 96, 1.0, 0.4);
    CHECK(st.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const auto back = frame::expand_in_frame(st, gt, 2.1, 32, 1.0, 0.4);
    CHECK((back.coeffs - coeffs).norm() < 1e-10);
    const auto again = frame::reassemble(back.coeffs, gt, 2.1, 96, 1.0, 0.4);
    CHECK(std::abs(again.amplitudes.dot(st.amplitudes)) == doctest::Approx(1.0).epsilon(1e-10));

    // A state outside the basis span.
    SystemState high;
    high.dim_osc = 96;
    high.dim_qubit = 2;
    high.amplitudes = CVector::Zero(192);
    high.amplitudes(90) = 1.0;
    try {
        frame::expand_in_frame(high, 0.0, 0.0, 8);
        FAIL("expected IncompleteBasisError");
    } catch (const IncompleteBasisError& err) {
        CHECK(err.residual == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("first-order propagator") {
    const frame::FirstOrderOptions opt{48, 12, 64};
    auto zero = single(3.0 * kT, model::Constant{0.833});
    const CMatrix id = CMatrix::Identity(24, 24);
    CHECK(max_abs(frame::first_order_propagator(zero, 0.833, 3.0 * kT, opt) - id) < 1e-14);

    for (int k = 1; k <= 3; ++k) {
        model::Schedule s;
        s.segments.push_back({0.0, k * kT, model::Constant{0.833}, model::Constant{0.05}});
        s.segments.push_back({k * kT, 2 * k * kT, model::Constant{0.833}, model::Constant{-0.05}});
        const CMatrix j = frame::first_order_propagator(s, 0.833, 2 * k * kT, opt);
        CHECK(max_abs(j - id) < 1e-8);
        // The same cancellation realized with a sigma_x pulse.
        auto p = single(2 * k * kT, model::Constant{0.833}, model::Constant{0.05});
        p.pulses.push_back({k * kT, Axis::x});
        CHECK(max_abs(frame::first_order_propagator(p, 0.833, 2 * k * kT, opt) - id) < 1e-8);
        // Off the fixed point g~ circles with the period, so it still cancels.
        CHECK(max_abs(frame::first_order_propagator(p, cplx(0.5, 0.4), 2 * k * kT, opt) - id) < 1e-8);
    }

    // Without the echo the half-way propagator is far from identity.
    auto plain = single(2.0 * kT, model::Constant{0.833}, model::Constant{0.05});
    const CMatrix j = frame::first_order_propagator(plain, 0.833, 2.0 * kT, opt);
    CHECK(max_abs(j - id) > 1e-2);
    CHECK(max_abs(j.adjoint() * j - id) < 1e-12);

    CHECK_THROWS_AS(frame::first_order_propagator(plain, 0.833, kT, {48, 12, 32}), std::invalid_argument);
    test::WarningCapture capture;
    auto strong = single(kT, model::Constant{0.5}, model::Constant{0.5});
    frame::first_order_propagator(strong, 0.5, kT, opt);
    CHECK(capture.messages.size() == 1);
}
