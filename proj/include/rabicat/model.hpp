// model.hpp: Qubit-oscillator Hamiltonian with time-dependent coupling and
// qubit splitting, driven by a declarative Schedule of waveforms and ideal
// (instantaneous) pi pulses.
//
//   H(t) = -Delta(t)/2 sigma_z + omega (a^dag a + 1/2) + g(t) sigma_x (a^dag + a)
//
// Units: hbar = 1, rates in rad/s. The scenario layer uses omega = 1 and
// expresses times in oscillator periods.

#pragma once

#include "rabicat/fock.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rabicat::model {

struct Constant {
    double value{0.0};
};

// amplitude * cos(frequency * t + phase), t measured from the schedule origin.
struct Cosine {
    double amplitude{0.0};
    double frequency{1.0};
    double phase{0.0};
};

// Straight line from v0 at the segment start to v1 at the segment end.
struct Linear {
    double v0{0.0};
    double v1{0.0};
};

using Waveform = std::variant<Constant, Cosine, Linear>;

double evaluate(const Waveform& w, double t, double t_start, double t_end);
// Upper bound on |w(t)| over [t_start, t_end].
double max_abs(const Waveform& w);
std::string describe(const Waveform& w);

struct Segment {
    double t_start{0.0};
    double t_end{0.0};
    Waveform g{Constant{}};
    Waveform delta{Constant{}};
};

enum class Axis { x, y, z };

std::string to_string(Axis axis);
Axis parse_axis(const std::string& s);

struct Pulse {
    double time{0.0};
    Axis axis{Axis::x};
};

// Sign flips seen by the Hamiltonian after conjugation with a Pauli pulse.
struct Flips {
    bool flip_g{false};
    bool flip_delta{false};
};

Flips effective_flips(Axis axis);

// Accumulated effective signs in the pulse (toggling) frame.
struct FrameSigns {
    int g{1};
    int delta{1};
};

struct Schedule {
    double omega{1.0};
    std::vector<Segment> segments;
    std::vector<Pulse> pulses;

    double t_start() const;
    double t_final() const;
    double period() const;

    // Segment containing t; segments are half-open [t_start, t_end) except
    // the last, which also owns t_final.
    const Segment& segment_at(double t) const;
    double g_at(double t) const;
    double delta_at(double t) const;

    // Signs produced by all pulses with time <= t (or < t when `strict`).
    FrameSigns signs_at(double t, bool strict = false) const;

    // Segment boundaries and pulse times strictly inside (t0, t1), plus t0 and t1.
    std::vector<double> breakpoints(double t0, double t1) const;

    // Human-readable descriptions of every violated invariant; empty when valid.
    std::vector<std::string> violations() const;
    // Throws ValidationError listing violations().
    void validate() const;

    // Appends `other` shifted to start at this schedule's end.
    Schedule& append(const Schedule& other);
};

struct HamiltonianParams {
    double g{0.0};
    double delta{0.0};
    double omega{1.0};
    std::size_t dim_osc{2};
};

void validate(const HamiltonianParams& p);

// Dense Hermitian H on the 2 * dim_osc space.
TruncatedOperator hamiltonian_at(const HamiltonianParams& p);

// Real symmetric form of the same matrix (H is real in the sigma_x basis).
RMatrix hamiltonian_real(const HamiltonianParams& p);

// Structured H * block without forming H; rows follow the state layout.
void apply_hamiltonian(const HamiltonianParams& p, const CMatrix& in, CMatrix& out);

// Gershgorin interval containing the spectrum of H for |g| <= g_max and
// |Delta| <= delta_max.
SpectralBounds hamiltonian_bounds(double g_max, double delta_max, double omega,
                                  std::size_t dim_osc);

// Pauli matrix in the (|+>_x, |->_x) basis.
Eigen::Matrix2cd pauli(Axis axis);

// Applies a 2x2 qubit operator to the qubit factor of a full state.
SystemState apply_qubit_operator(const SystemState& state, const Eigen::Matrix2cd& op);

SystemState apply_pulse(const SystemState& state, Axis axis);

// Whether evolution over [t0, t1] applies a pulse at `time`: the window is
// half-open except at the schedule end, so consecutive windows never apply a
// pulse twice.
bool pulse_in_window(const Schedule& schedule, double time, double t0, double t1);

// Product of the pulses applied over [t0, t1] (later pulses on the left).
Eigen::Matrix2cd net_pulse_operator(const Schedule& schedule, double t0, double t1);

} // namespace rabicat::model
