// runner.hpp: Executes a Scenario: builds the schedules, propagates, and
// evaluates projected cat fidelities at named checkpoints.
//
// Fidelities are taken in the pulse frame: the net product of applied Pauli
// pulses is undone, the qubit is projected onto (|+>_x + |->_x)/sqrt(2), and
// the oscillator part is compared with the even cat at g~(t)/omega.

#pragma once

#include "rabicat/frame.hpp"
#include "rabicat/scenario.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace rabicat::cli {

struct Variant {
    std::string name;
    model::Schedule schedule;
    // Checkpoints evaluated on this variant beyond those it shares with the
    // first one (name, time in internal units).
    std::vector<std::pair<std::string, double>> checkpoints;
};

struct Plan {
    std::vector<Variant> variants;
    cplx gtilde0{0.0};
    // Time up to which every variant coincides with the first one.
    double shared_until{0.0};
    std::vector<std::pair<std::string, double>> shared_checkpoints;
};

// Schedules and checkpoints for a scenario; throws ValidationError or
// std::invalid_argument for inconsistent protocol settings.
Plan build_plan(const Scenario& scenario);

struct Checkpoint {
    std::string name;
    double time{0.0};
    cplx gtilde{0.0};
    SystemState oscillator; // normalized projection in the pulse frame
    double weight{0.0};
    double fidelity{0.0};
    double overlap_probability{0.0};
    double leakage{0.0};
};

using Summary = std::vector<std::pair<std::string, double>>;

struct RunResult {
    Summary summary;
    std::vector<Checkpoint> checkpoints;
    std::vector<frame::DynamicalFrame> trajectory;
    model::Schedule schedule; // first variant
    std::size_t dim_osc{0};
};

// Trajectory of the first variant sampled `samples_per_period` times per period.
std::vector<frame::DynamicalFrame> sample_trajectory(const Plan& plan, std::size_t samples_per_period);

// Dimension from the scenario or the sizing rule applied to the largest |g~|.
std::size_t choose_dim(const Scenario& scenario, const Plan& plan);

RunResult run_scenario(const Scenario& scenario);

// Analytic frame only: trajectory and the predicted final |g~|.
RunResult run_frame(const Scenario& scenario);

// Writes summary.txt, fidelities.csv, gtilde.csv and requested Wigner and
// state files into `dir`.
void write_outputs(const Scenario& scenario, const RunResult& result,
                   const std::filesystem::path& dir, std::size_t jobs = 1);

} // namespace rabicat::cli
