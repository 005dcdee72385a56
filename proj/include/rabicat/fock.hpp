// fock.hpp: Truncated Fock-space primitives: ladder and displacement
// operators, coherent and cat states, qubit (x) oscillator assembly.
//
// Qubit factors are always expressed in the sigma_x eigenbasis ordered
// (|+>_x, |->_x). A full state stores the |+>_x branch in the first dim_osc
// amplitudes and the |->_x branch in the next dim_osc.

#pragma once

#include "rabicat/linalg.hpp"

#include <cstddef>

namespace rabicat {

struct TruncatedOperator {
    std::size_t dim_osc{0};
    std::size_t dim_qubit{1};
    CMatrix entries;
    bool hermitian{false};

    std::size_t dim() const noexcept { return dim_qubit * dim_osc; }
    // Throws InvalidDimension on shape mismatch and InternalConsistencyError
    // when a Hermitian-flagged operator is not Hermitian to 1e-12 (relative).
    void check() const;
};

struct SystemState {
    CVector amplitudes;
    std::size_t dim_osc{0};
    std::size_t dim_qubit{1};
    double leakage{0.0};
    bool unnormalized{false};

    std::size_t dim() const noexcept { return dim_qubit * dim_osc; }
    double norm() const { return amplitudes.norm(); }
    // Oscillator amplitudes of qubit branch q (0 = |+>_x, 1 = |->_x).
    CVector branch(std::size_t q) const;
    SystemState normalized() const;
    // Throws on shape mismatch or, unless flagged unnormalized, a norm
    // outside [1 - 1e-6, 1 + 1e-6].
    void check() const;
};

// Qubit amplitudes in the (|+>_x, |->_x) basis.
struct QubitCoeffs {
    cplx plus{1.0};
    cplx minus{0.0};
};

namespace fock {

struct Ladder {
    TruncatedOperator annihilation;
    TruncatedOperator creation;
};

Ladder ladder(std::size_t dim_osc);

// exp(alpha a^dag - alpha^* a) on the truncated space. Warns when
// |alpha|^2 > dim_osc / 4.
TruncatedOperator displacement(cplx alpha, std::size_t dim_osc);

// Reusable D(alpha) action for a fixed amplitude and dimension; the
// expansion is built once.
class Displacer {
public:
    Displacer(cplx alpha, std::size_t dim_osc);
    // Replaces each column of `block` (rows = Fock levels) by D(alpha) column.
    void apply(CMatrix& block) const;

private:
    cplx alpha_;
    Eigen::Index dim_;
    Eigen::VectorXd sqrt_levels_;
    ChebyshevExpansion expansion_;
};

// D(alpha) applied to each column of `block` (rows = Fock levels) without
// forming the dense operator.
CMatrix displace(cplx alpha, const CMatrix& block);
CVector displace(cplx alpha, const CVector& v);

SystemState coherent_state(cplx alpha, std::size_t dim_osc);

// (|-alpha> + sign |+alpha>) normalized. Throws NullStateError when the
// superposition vanishes (odd cat at alpha = 0).
SystemState cat_state(cplx alpha, int relative_sign, std::size_t dim_osc);

// osc (x) (c+ |+>_x + c- |->_x).
SystemState tensor_qubit(const SystemState& osc, QubitCoeffs qubit);

// |+>_x plus_part + |->_x minus_part (entangled assembly).
SystemState tensor_branches(const CVector& plus_part, const CVector& minus_part);

// Default truncation for coherent amplitudes up to max_amplitude:
// ceil(|a|^2 + 6|a| + 20) rounded up to a power of two.
std::size_t recommended_dim(double max_amplitude);

// Probability of a Poisson(|alpha|^2) photon count at or above dim_osc.
double coherent_tail(cplx alpha, std::size_t dim_osc);

} // namespace fock
} // namespace rabicat
