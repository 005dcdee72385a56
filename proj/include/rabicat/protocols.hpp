// protocols.hpp: Schedule builders for cat amplification and echo
// experiments. Builders only construct schedules; nothing is simulated here.
//
// All builders assume g~(0) = g(0), i.e. the system starts in a ground-like
// dynamical eigenstate, and attach the g~ they predict at the schedule end.

#pragma once

#include "rabicat/model.hpp"

#include <string>

namespace rabicat::protocols {

struct Protocol {
    std::string name;
    model::Schedule schedule;
    cplx gtilde_initial{0.0};
    // Closed-form expectation for g~ at schedule.t_final().
    cplx predicted_gtilde{0.0};
};

// g(t) = g0 cos(omega t) for n_periods (a non-negative multiple of 1/2).
// n_periods = 0 yields an empty schedule with g~ unchanged. Predicted
// |g~| / g0 = sqrt(1 + (n pi)^2).
Protocol build_sinusoidal_amplification(double g0, double n_periods, double delta = 0.0,
                                        double omega = 1.0);

struct PulseTrainOptions {
    model::Axis axis{model::Axis::y};
    // Pulse spacing in periods.
    double interval_periods{0.5};
    // A pulse at t = 0 reproduces |g~/omega| = 2.1 for g0 = 0.1 omega over
    // five periods; starting at half a period gives 1.9 instead.
    double first_pulse_periods{0.0};
    double delta{0.0};
    double omega{1.0};
};

// Constant g0 with pulses at first, first + interval, ... strictly before
// the end. Rejects axis x, which leaves g untouched.
Protocol build_pulse_train_amplification(double g0, double n_periods,
                                         const PulseTrainOptions& options = {});

// Constant g0 and Delta for free_periods with n_pulses sigma_x pulses at the
// boundaries of n_pulses + 1 equal intervals, each an integer number of
// periods (the first-order dephasing only cancels over whole periods).
Protocol build_echo(double g0, double delta, double free_periods, std::size_t n_pulses = 1,
                    double omega = 1.0);

// (pi / chi_qs) / (n_periods * 2 pi / omega): how much faster the
// modulation protocol reaches the cat than a dispersive one.
double speedup_estimate(double omega, double chi_qs, double n_periods);

} // namespace rabicat::protocols
