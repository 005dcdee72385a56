#include "rabicat/propagator.hpp"

#include "rabicat/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace rabicat::propagator {

namespace {

constexpr double kTimeEps = 1e-12;

double top_level_population(const CVector& amps, std::size_t dim_osc) {
    const auto d = static_cast<Eigen::Index>(dim_osc);
    return std::norm(amps(d - 1)) + std::norm(amps(2 * d - 1));
}

void apply_pulses_at(const model::Schedule& schedule, double time, double t0, double t1,
                     SystemState& s) {
    for (const auto& p : schedule.pulses) {
        if (std::abs(p.time - time) <= kTimeEps && model::pulse_in_window(schedule, p.time, t0, t1)) {
            s = model::apply_pulse(s, p.axis);
        }
    }
}

} // namespace

SystemState evolve(const SystemState& state, const model::Schedule& schedule, double t0,
                   double t1, const EvolveOptions& options) {
    if (options.steps_per_period < 32) {
        throw std::invalid_argument("evolve: steps_per_period must be at least 32");
    }
    if (state.dim_qubit != 2) {
        throw InvalidDimension("evolve: needs a full qubit (x) oscillator state");
    }
    if (t1 < t0) {
        throw std::invalid_argument("evolve: t1 must not precede t0");
    }
    schedule.validate();
    if (t0 < schedule.t_start() - kTimeEps || t1 > schedule.t_final() + kTimeEps) {
        std::ostringstream msg;
        msg << "evolve: window [" << t0 << ", " << t1 << "] exceeds the schedule span ["
            << schedule.t_start() << ", " << schedule.t_final() << "]";
        throw std::out_of_range(msg.str());
    }

    const double omega = schedule.omega;
    model::HamiltonianParams params{0.0, 0.0, omega, state.dim_osc};
    SystemState s = state;
    const double norm0 = s.norm();
    double leakage = std::max(state.leakage, top_level_population(s.amplitudes, s.dim_osc));
    auto check_norm = [&](double t) {
        const double drift = std::abs(s.norm() - norm0);
        if (drift > options.norm_tolerance) {
            std::ostringstream msg;
            msg << "evolve: norm drifted by " << drift << " at t = " << t
                << "; increase steps_per_period or dim_osc";
            throw IntegrationFailure(msg.str());
        }
    };

    CMatrix work = s.amplitudes;
    auto op = [&params](const CMatrix& in, CMatrix& out) {
        model::apply_hamiltonian(params, in, out);
    };

    const auto pts = schedule.breakpoints(t0, t1);
    std::size_t steps_done = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        s.amplitudes = work.col(0);
        apply_pulses_at(schedule, a, t0, t1, s);
        work = s.amplitudes;
        if (b - a <= kTimeEps) {
            continue;
        }
        const auto& seg = schedule.segment_at(0.5 * (a + b));
        const auto n = static_cast<std::size_t>(std::max(
            1.0, std::ceil((b - a) / schedule.period() *
                               static_cast<double>(options.steps_per_period) -
                           1e-9)));
        const double dt = (b - a) / static_cast<double>(n);
        const ChebyshevExpansion step(
            model::hamiltonian_bounds(model::max_abs(seg.g), model::max_abs(seg.delta), omega,
                                      state.dim_osc),
            dt);
        for (std::size_t k = 0; k < n; ++k) {
            const double tm = a + (static_cast<double>(k) + 0.5) * dt;
            params.g = model::evaluate(seg.g, tm, seg.t_start, seg.t_end);
            params.delta = model::evaluate(seg.delta, tm, seg.t_start, seg.t_end);
            step.apply(op, work);
            leakage = std::max(leakage, top_level_population(work.col(0), s.dim_osc));
            if (++steps_done % 100 == 0) {
                s.amplitudes = work.col(0);
                check_norm(tm + 0.5 * dt);
            }
        }
    }
    s.amplitudes = work.col(0);
    apply_pulses_at(schedule, t1, t0, t1, s);
    check_norm(t1);
    s.leakage = leakage;
    return s;
}

SystemState ground_state(const model::HamiltonianParams& params, double* energy) {
    model::validate(params);
    if (std::abs(params.delta) < 1e-12 * std::max(1.0, std::abs(params.omega))) {
        throw DegeneracyError(
            "ground_state: Delta = 0 leaves the ground level doubly degenerate; use "
            "frame::dynamical_eigenstate instead");
    }
    const Eigen::SelfAdjointEigenSolver<RMatrix> solver(model::hamiltonian_real(params));
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("ground_state: eigensolver did not converge");
    }
    Eigen::VectorXd v = solver.eigenvectors().col(0);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) {
        v = -v;
    }
    if (energy != nullptr) {
        *energy = solver.eigenvalues()(0);
    }
    SystemState s;
    s.amplitudes = v.cast<cplx>();
    s.dim_osc = params.dim_osc;
    s.dim_qubit = 2;
    return s;
}

double energy_expectation(const SystemState& state, const model::HamiltonianParams& params) {
    CMatrix out;
    model::apply_hamiltonian(params, state.amplitudes, out);
    return state.amplitudes.dot(out.col(0)).real();
}

} // namespace rabicat::propagator
