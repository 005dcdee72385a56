// propagator.hpp: Full-Hamiltonian time evolution by piecewise-constant
// midpoint stepping, and exact ground states.
//
// Each step applies exp(-i H(t_mid) dt) to the state through a Chebyshev
// expansion whose coefficients depend only on dt and the spectral interval
// of the segment, so they are built once per segment.

#pragma once

#include "rabicat/fock.hpp"
#include "rabicat/model.hpp"

namespace rabicat::propagator {

struct EvolveOptions {
    std::size_t steps_per_period{512};
    // Largest allowed |norm - initial norm| before IntegrationFailure.
    double norm_tolerance{1e-6};
};

// Evolves `state` (given at t0, before any pulse at t0) to t1. Pulses are
// applied exactly at their times per model::pulse_in_window. The returned
// state's leakage is the largest top-Fock-level population seen.
SystemState evolve(const SystemState& state, const model::Schedule& schedule, double t0,
                   double t1, const EvolveOptions& options = {});

// Lowest eigenvector of H, phase fixed so the largest amplitude is real and
// positive. Throws DegeneracyError for Delta = 0.
SystemState ground_state(const model::HamiltonianParams& params, double* energy = nullptr);

// <psi| H |psi> for a normalized state.
double energy_expectation(const SystemState& state, const model::HamiltonianParams& params);

} // namespace rabicat::propagator
