// scenario.hpp: Declarative experiment description loaded from YAML.
//
// Rates are in units of omega and times in oscillator periods; the loader
// converts to the internal units (omega = 1, t in radians of oscillator
// phase). Overrides use dotted paths: "system.delta=0.05".

#pragma once

#include "rabicat/model.hpp"

#include <yaml-cpp/yaml.h>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace rabicat::cli {

enum class InitialKind { ground, dynamical };

struct InitialState {
    InitialKind kind{InitialKind::ground};
    std::optional<cplx> gtilde; // defaults to g(0)
    std::size_t n{0};
    int branch{+1};
};

enum class ProtocolKind { sinusoidal, pulse_train, echo, custom };

enum class HoldCoupling { drive, zero };

struct ProtocolSpec {
    ProtocolKind kind{ProtocolKind::sinusoidal};
    // sinusoidal: drive duration; pulse_train: total duration.
    double periods{2.0};
    // sinusoidal: free evolution appended after the drive.
    double hold_periods{0.0};
    HoldCoupling hold_coupling{HoldCoupling::drive};
    // sinusoidal hold and echo: one run per sigma_x pulse count.
    std::vector<std::size_t> echo_pulses{0};
    // echo: free evolution length.
    double free_periods{10.0};
    // pulse_train
    std::vector<model::Axis> axes{model::Axis::y};
    double interval_periods{0.5};
    double first_pulse_periods{0.0};
};

struct GridAxis {
    double lo{-6.0};
    double hi{6.0};
    std::size_t count{121};
};

struct Outputs {
    std::vector<std::string> wigner;
    GridAxis wigner_q;
    GridAxis wigner_p;
    std::vector<std::string> states;
    std::size_t trajectory_samples{64}; // per period
    std::vector<double> checkpoints;    // custom protocol, in periods
};

struct Numerics {
    std::size_t dim{0}; // 0 selects the sizing rule
    std::size_t steps_per_period{512};
};

struct Scenario {
    std::string name;
    double g0{0.0};
    double delta{0.0};
    InitialState initial;
    ProtocolSpec protocol;
    model::Schedule custom; // internal units
    Outputs outputs;
    Numerics numerics;
};

// Reads the YAML tree; ParseError carries the offending line.
YAML::Node load_tree(const std::string& path);

// Applies "a.b.c=value" (value parsed as YAML) to the tree.
void apply_override(YAML::Node& tree, const std::string& assignment);

Scenario interpret(const YAML::Node& tree, const std::string& fallback_name);

Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides = {});

} // namespace rabicat::cli
