// analysis.hpp: Qubit projection, fidelity, cat size, amplitude fitting and
// Wigner functions.
//
// Wigner convention: W(q, p) = (1/pi) <D(alpha) P D(alpha)^dag> with
// alpha = (q + i p) / sqrt(2) and P the photon-number parity, so that
// the integral of W over dq dp is 1 and the vacuum peaks at 1/pi.

#pragma once

#include "rabicat/fock.hpp"

#include <iosfwd>
#include <vector>

namespace rabicat::analysis {

struct Projection {
    SystemState oscillator; // unnormalized <qubit|state>
    double weight{0.0};     // its squared norm
};

// Projects onto the (normalized) qubit state c+ |+>_x + c- |->_x. Throws
// NullStateError when the weight is below 1e-12.
Projection project_qubit(const SystemState& state, QubitCoeffs qubit);

// |<a|b>| for unit vectors. Inputs off unit norm are normalized first, with a
// warning unless they are flagged unnormalized.
double fidelity(const SystemState& a, const SystemState& b);

// |<a|b>|^2, same normalization rules.
double overlap_probability(const SystemState& a, const SystemState& b);

double cat_size(cplx beta1, cplx beta2);

struct AmplitudeFit {
    cplx alpha{0.0};
    double fidelity{0.0};
    std::size_t sweeps{0};
};

// Even-cat amplitude maximizing fidelity, by coordinate descent over
// (Re alpha, Im alpha) with golden-section line searches. Throws
// ConvergenceError if alpha has not settled to `tol` after max_sweeps.
AmplitudeFit extract_amplitude(const SystemState& oscillator, cplx initial_guess,
                               double tol = 1e-8, std::size_t max_sweeps = 200);

std::vector<double> uniform_axis(double lo, double hi, std::size_t count);

struct WignerGrid {
    std::vector<double> q_axis;
    std::vector<double> p_axis;
    RMatrix values; // rows follow p, columns follow q

    // Trapezoid estimates of the integrals of W and 2 pi W^2.
    double normalization() const;
    double purity() const;

    // Header row "p\q,q0,q1,...", then one row per p: "p,W(q0,p),...".
    void write_csv(std::ostream& out) const;
};

struct WignerOptions {
    std::size_t jobs{1};
};

WignerGrid wigner(const SystemState& oscillator, const std::vector<double>& q_axis,
                  const std::vector<double>& p_axis, const WignerOptions& options = {});

// Density-matrix input (Hermitian, unit trace).
WignerGrid wigner(const CMatrix& density, const std::vector<double>& q_axis,
                  const std::vector<double>& p_axis, const WignerOptions& options = {});

} // namespace rabicat::analysis
