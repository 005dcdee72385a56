#include "rabicat/fock.hpp"

#include "rabicat/errors.hpp"
#include "rabicat/warnings.hpp"

#include <cmath>
#include <sstream>

namespace rabicat {

void TruncatedOperator::check() const {
    if (dim_osc < 1 || (dim_qubit != 1 && dim_qubit != 2)) {
        throw InvalidDimension("TruncatedOperator: invalid dimensions");
    }
    const auto n = static_cast<Eigen::Index>(dim());
    if (entries.rows() != n || entries.cols() != n) {
        throw InvalidDimension("TruncatedOperator: entry count does not match dimensions");
    }
    if (hermitian) {
        const double scale = std::max(max_abs(entries), 1e-300);
        const CMatrix adj = entries.adjoint();
        if (max_abs(entries - adj) > 1e-12 * scale) {
            throw InternalConsistencyError("TruncatedOperator: flagged Hermitian but A != A^dag");
        }
    }
}

CVector SystemState::branch(std::size_t q) const {
    if (q >= dim_qubit) {
        throw InvalidDimension("SystemState::branch: qubit index out of range");
    }
    return amplitudes.segment(static_cast<Eigen::Index>(q * dim_osc),
                              static_cast<Eigen::Index>(dim_osc));
}

SystemState SystemState::normalized() const {
    const double n = norm();
    if (n == 0.0) {
        throw NullStateError("cannot normalize a zero state");
    }
    SystemState out = *this;
    out.amplitudes /= n;
    out.unnormalized = false;
    return out;
}

void SystemState::check() const {
    if (dim_osc < 1 || (dim_qubit != 1 && dim_qubit != 2)) {
        throw InvalidDimension("SystemState: invalid dimensions");
    }
    if (amplitudes.size() != static_cast<Eigen::Index>(dim())) {
        throw InvalidDimension("SystemState: amplitude count does not match dimensions");
    }
    if (!unnormalized && std::abs(norm() - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg << "SystemState: norm " << norm() << " outside 1 +- 1e-6";
        throw InternalConsistencyError(msg.str());
    }
}

namespace fock {

namespace {

Eigen::VectorXd sqrt_levels(Eigen::Index dim) {
    // sqrt(1), ..., sqrt(dim - 1)
    return Eigen::VectorXd::LinSpaced(dim - 1, 1.0, static_cast<double>(dim - 1)).cwiseSqrt();
}

// Unnormalized closed-form coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!).
CVector coherent_amplitudes(cplx alpha, std::size_t dim) {
    CVector c = CVector::Zero(static_cast<Eigen::Index>(dim));
    const double r = std::abs(alpha);
    if (r == 0.0) {
        c[0] = 1.0;
        return c;
    }
    const double theta = std::arg(alpha);
    const double log_r = std::log(r);
    for (std::size_t n = 0; n < dim; ++n) {
        const double nd = static_cast<double>(n);
        const double log_mag = -0.5 * r * r + nd * log_r - 0.5 * std::lgamma(nd + 1.0);
        c[static_cast<Eigen::Index>(n)] = std::polar(std::exp(log_mag), nd * theta);
    }
    return c;
}

} // namespace

Ladder ladder(std::size_t dim_osc) {
    if (dim_osc < 2) {
        throw InvalidDimension("ladder: dim_osc must be at least 2");
    }
    const auto d = static_cast<Eigen::Index>(dim_osc);
    CMatrix a = CMatrix::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    Ladder out;
    out.annihilation = {dim_osc, 1, a, false};
    out.creation = {dim_osc, 1, a.adjoint(), false};
    return out;
}

TruncatedOperator displacement(cplx alpha, std::size_t dim_osc) {
    const auto lad = ladder(dim_osc);
    if (std::norm(alpha) > static_cast<double>(dim_osc) / 4.0) {
        std::ostringstream msg;
        msg << "displacement: |alpha|^2 = " << std::norm(alpha) << " exceeds dim_osc/4 = "
            << static_cast<double>(dim_osc) / 4.0 << "; truncation error likely";
        warn(msg.str());
    }
    const CMatrix generator =
        alpha * lad.creation.entries - std::conj(alpha) * lad.annihilation.entries;
    return {dim_osc, 1, expm(generator), false};
}

Displacer::Displacer(cplx alpha, std::size_t dim_osc)
    : alpha_(alpha),
      dim_(static_cast<Eigen::Index>(dim_osc)),
      expansion_({-1.0, 1.0}, 0.0) {
    if (dim_osc < 2) {
        throw InvalidDimension("displace: need at least two Fock levels");
    }
    sqrt_levels_ = sqrt_levels(dim_);
    // K = i(alpha a^dag - alpha^* a) is Hermitian and D(alpha) = exp(-i K).
    const double bound = 2.0 * std::abs(alpha) * std::sqrt(static_cast<double>(dim_ - 1));
    expansion_ = ChebyshevExpansion({-bound, bound}, 1.0);
}

void Displacer::apply(CMatrix& block) const {
    if (block.rows() != dim_) {
        throw InvalidDimension("Displacer: block row count differs from dim_osc");
    }
    if (alpha_ == cplx{0.0, 0.0}) {
        return;
    }
    const cplx up = kI * alpha_;
    const cplx down = -kI * std::conj(alpha_);
    const double* sq = sqrt_levels_.data();
    const Eigen::Index d = dim_;
    auto op = [&](const CMatrix& in, CMatrix& out) {
        out.resize(in.rows(), in.cols());
        for (Eigen::Index c = 0; c < in.cols(); ++c) {
            const cplx* x = in.col(c).data();
            cplx* y = out.col(c).data();
            y[0] = down * sq[0] * x[1];
            for (Eigen::Index n = 1; n + 1 < d; ++n) {
                y[n] = up * (sq[n - 1] * x[n - 1]) + down * (sq[n] * x[n + 1]);
            }
            y[d - 1] = up * sq[d - 2] * x[d - 2];
        }
    };
    expansion_.apply(op, block);
}

CMatrix displace(cplx alpha, const CMatrix& block) {
    CMatrix v = block;
    Displacer(alpha, static_cast<std::size_t>(block.rows())).apply(v);
    return v;
}

CVector displace(cplx alpha, const CVector& v) {
    CMatrix m = v;
    Displacer(alpha, static_cast<std::size_t>(v.size())).apply(m);
    return m.col(0);
}

double coherent_tail(cplx alpha, std::size_t dim_osc) {
    const CVector c = coherent_amplitudes(alpha, dim_osc);
    return std::max(0.0, 1.0 - c.squaredNorm());
}

SystemState coherent_state(cplx alpha, std::size_t dim_osc) {
    if (dim_osc < 2) {
        throw InvalidDimension("coherent_state: dim_osc must be at least 2");
    }
    CVector c = coherent_amplitudes(alpha, dim_osc);
    const double tail = std::max(0.0, 1.0 - c.squaredNorm());
    if (tail > 1e-8) {
        std::ostringstream msg;
        msg << "coherent_state: truncation discards probability " << tail << " at |alpha| = "
            << std::abs(alpha) << ", dim_osc = " << dim_osc;
        warn(msg.str());
    }
    c.normalize();
    return {c, dim_osc, 1, tail, false};
}

SystemState cat_state(cplx alpha, int relative_sign, std::size_t dim_osc) {
    if (relative_sign != 1 && relative_sign != -1) {
        throw std::invalid_argument("cat_state: relative_sign must be +1 or -1");
    }
    if (dim_osc < 2) {
        throw InvalidDimension("cat_state: dim_osc must be at least 2");
    }
    const CVector minus = coherent_amplitudes(-alpha, dim_osc);
    const CVector plus = coherent_amplitudes(alpha, dim_osc);
    CVector v = minus + static_cast<double>(relative_sign) * plus;
    const double n = v.norm();
    if (n < 1e-12) {
        throw NullStateError("cat_state: superposition vanishes (odd cat with alpha = 0)");
    }
    const double tail = std::max(0.0, 1.0 - plus.squaredNorm());
    if (tail > 1e-8) {
        std::ostringstream msg;
        msg << "cat_state: truncation discards probability " << tail << " at |alpha| = "
            << std::abs(alpha);
        warn(msg.str());
    }
    v /= n;
    return {v, dim_osc, 1, tail, false};
}

SystemState tensor_qubit(const SystemState& osc, QubitCoeffs qubit) {
    if (osc.dim_qubit != 1) {
        throw InvalidDimension("tensor_qubit: expected an oscillator-only state");
    }
    const auto d = static_cast<Eigen::Index>(osc.dim_osc);
    SystemState out;
    out.dim_osc = osc.dim_osc;
    out.dim_qubit = 2;
    out.leakage = osc.leakage;
    out.amplitudes.resize(2 * d);
    out.amplitudes.head(d) = qubit.plus * osc.amplitudes;
    out.amplitudes.tail(d) = qubit.minus * osc.amplitudes;
    out.unnormalized = std::abs(out.norm() - 1.0) > 1e-6;
    return out;
}

SystemState tensor_branches(const CVector& plus_part, const CVector& minus_part) {
    if (plus_part.size() != minus_part.size() || plus_part.size() < 2) {
        throw InvalidDimension("tensor_branches: branch dimensions differ or are too small");
    }
    const auto d = plus_part.size();
    SystemState out;
    out.dim_osc = static_cast<std::size_t>(d);
    out.dim_qubit = 2;
    out.amplitudes.resize(2 * d);
    out.amplitudes.head(d) = plus_part;
    out.amplitudes.tail(d) = minus_part;
    out.unnormalized = std::abs(out.norm() - 1.0) > 1e-6;
    return out;
}

std::size_t recommended_dim(double max_amplitude) {
    const double a = std::abs(max_amplitude);
    const auto need = static_cast<std::size_t>(std::ceil(a * a + 6.0 * a + 20.0));
    std::size_t dim = 2;
    while (dim < need) {
        dim *= 2;
    }
    return dim;
}

} // namespace fock
} // namespace rabicat
