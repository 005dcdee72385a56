// frame.hpp: The Delta -> 0 analytic frame: the complex frame coupling
// g~(t) obeying dg~/dt = i omega (g - g~), the dynamical evolution
// eigenstates built from it, and the first-order-in-Delta coefficient
// propagator.
//
// All quantities live in the toggling frame of the pulse schedule: after a
// pulse the Hamiltonian is conjugated, so g and Delta carry the signs given
// by Schedule::signs_at. The lab-frame state is Q * (toggling-frame state),
// with Q the product of the pulses applied so far.
//
// Basis convention: b_{N,s}(t) = e^{i phi_global} e^{-i N omega t} E~_{N s}(t),
//   E~_{N s} = (|+>_x D(-g~/omega)|N> + s |->_x D(+g~/omega)|N>) / sqrt(2),
// ordered (0+, 1+, ..., (n_max-1)+, 0-, ..., (n_max-1)-).

#pragma once

#include "rabicat/fock.hpp"
#include "rabicat/model.hpp"

#include <vector>

namespace rabicat::frame {

struct DynamicalFrame {
    cplx gtilde{0.0};
    double time{0.0};
    // Integral of g Re(g~)/omega - omega/2, the N-independent phase.
    double phi_global{0.0};
    // Effective signs of g and Delta in force just after `time`.
    model::FrameSigns signs{};
};

// Exact g~(t1) from g~(t0) under `sign * g(t)` over [t0, t1], where g is the
// waveform of a segment spanning [seg_start, seg_end].
cplx gtilde_step(const model::Waveform& g, double seg_start, double seg_end, double t0,
                 double t1, cplx gtilde0, double omega, double sign = 1.0);

// Frames at each sample time (ascending, inside the schedule span). Pulses
// flip the sign of g for later times; g~ itself is continuous.
std::vector<DynamicalFrame> gtilde_trajectory(const model::Schedule& schedule, cplx gtilde0,
                                              const std::vector<double>& sample_times);

DynamicalFrame frame_at(const model::Schedule& schedule, cplx gtilde0, double t);

// Normalized E~_{N s} with g~ in rad/s.
SystemState dynamical_eigenstate(cplx gtilde, std::size_t n, int branch, std::size_t dim_osc,
                                 double omega = 1.0);

// Columns b_{N,s}(t) (2 dim_osc rows, 2 n_max columns).
CMatrix frame_basis(cplx gtilde, double t, std::size_t n_max, std::size_t dim_osc,
                    double omega = 1.0, double phi_global = 0.0);

struct SigmaZMatrix {
    CMatrix full;
    double time{0.0};
    cplx gtilde{0.0};
    std::size_t n_max{0};

    // Block (row branch, column branch), branches +1 or -1.
    CMatrix block(int row_branch, int col_branch) const;
};

// M_jk = <b_j| sigma_z |b_k>.
SigmaZMatrix sigma_z_matrix(cplx gtilde, double t, std::size_t n_max, std::size_t dim_osc,
                            double omega = 1.0);

struct FirstOrderOptions {
    std::size_t dim_osc{0};
    std::size_t n_max{0};
    std::size_t nodes_per_period{64};
};

// exp((i/2) int_0^t Delta_eff(s) M(s) ds), acting on coefficient vectors.
CMatrix first_order_propagator(const model::Schedule& schedule, cplx gtilde0, double t,
                               const FirstOrderOptions& options);

struct Expansion {
    CVector coeffs;
    double residual{0.0};
};

// Coefficients of a toggling-frame state against frame_basis. Throws
// IncompleteBasisError when the reconstruction residual exceeds
// `max_residual`.
Expansion expand_in_frame(const SystemState& state, cplx gtilde, double t, std::size_t n_max,
                          double omega = 1.0, double phi_global = 0.0,
                          double max_residual = 1e-8);

SystemState reassemble(const CVector& coeffs, cplx gtilde, double t, std::size_t dim_osc,
                       double omega = 1.0, double phi_global = 0.0);

// Lab-frame Delta = 0 prediction at time t for an initial E~_{N s}(g~0).
SystemState predict_frame_state(const model::Schedule& schedule, cplx gtilde0, std::size_t n,
                                int branch, double t, std::size_t dim_osc);

// Lab-frame first-order prediction at time t for an arbitrary initial state
// expanded in the frame of g~0 at t = 0.
SystemState predict_first_order(const model::Schedule& schedule, cplx gtilde0,
                                const SystemState& initial, double t,
                                const FirstOrderOptions& options);

} // namespace rabicat::frame
