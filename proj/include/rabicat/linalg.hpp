// linalg.hpp: Dense complex types, matrix exponentials and the Chebyshev
// propagator used for every exp(-i A t) acting on a state.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace rabicat {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr cplx kI{0.0, 1.0};

// Closed interval containing the spectrum of a Hermitian operator.
struct SpectralBounds {
    double lo{0.0};
    double hi{0.0};
};

// Bessel functions J_0..J_kmax at x >= 0 by Miller's backward recurrence,
// normalized with J_0 + 2 sum J_2k = 1. Stable for any order/argument mix.
std::vector<double> bessel_j_sequence(double x, std::size_t kmax);

// exp(-i A tau) v for Hermitian A with spectrum inside `bounds`, expanded in
// Chebyshev polynomials of the rescaled operator. Coefficients are computed
// once per (bounds, tau) so repeated steps of equal length share them.
class ChebyshevExpansion {
public:
    ChebyshevExpansion(SpectralBounds bounds, double tau, double tol = 1e-16);

    std::size_t terms() const noexcept { return coeffs_.size(); }
    double tau() const noexcept { return tau_; }

    // `op(in, out)` must write out = A * in. `v` is overwritten with the result.
    template <class Op, class Mat>
    void apply(const Op& op, Mat& v) const;

private:
    double tau_;
    double center_;
    double half_width_;
    cplx phase_;
    std::vector<cplx> coeffs_;
};

template <class Op, class Mat>
void ChebyshevExpansion::apply(const Op& op, Mat& v) const {
    if (coeffs_.size() == 1) {
        v *= phase_ * coeffs_[0];
        return;
    }
    const double inv_r = 1.0 / half_width_;
    auto scaled = [&](const Mat& in, Mat& out) {
        op(in, out);
        out = (out - center_ * in) * inv_r;
    };

    Mat prev = v;
    Mat cur(v.rows(), v.cols());
    scaled(prev, cur);
    Mat acc = coeffs_[0] * prev + coeffs_[1] * cur;
    Mat next(v.rows(), v.cols());
    for (std::size_t k = 2; k < coeffs_.size(); ++k) {
        scaled(cur, next);
        next = 2.0 * next - prev;
        acc += coeffs_[k] * next;
        std::swap(prev, cur);
        std::swap(cur, next);
    }
    v = phase_ * acc;
}

// Padé scaling-and-squaring exponential (Eigen MatrixFunctions).
CMatrix expm(const CMatrix& a);

// exp(i * scale * K) for Hermitian K via its eigendecomposition, which keeps
// the result unitary to rounding.
CMatrix exp_i_hermitian(const CMatrix& k, double scale);

double max_abs(const CMatrix& a);

} // namespace rabicat
