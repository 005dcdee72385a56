#include "rabicat/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rabicat {

std::vector<double> bessel_j_sequence(double x, std::size_t kmax) {
    if (x < 0.0) {
        throw std::invalid_argument("bessel_j_sequence: argument must be non-negative");
    }
    std::vector<double> j(kmax + 1, 0.0);
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }
    // Start well above both kmax and the turning point k ~ x.
    std::size_t start = std::max<std::size_t>(kmax, static_cast<std::size_t>(x)) + 40 +
                        static_cast<std::size_t>(10.0 * std::cbrt(x));
    start += start % 2;

    std::vector<double> tmp(start + 2, 0.0);
    tmp[start + 1] = 0.0;
    tmp[start] = 1e-300;
    for (std::size_t k = start; k >= 1; --k) {
        tmp[k - 1] = (2.0 * static_cast<double>(k) / x) * tmp[k] - tmp[k + 1];
        if (std::abs(tmp[k - 1]) > 1e250) {
            for (std::size_t m = k - 1; m <= start + 1; ++m) {
                tmp[m] *= 1e-250;
            }
        }
    }
    double norm = tmp[0];
    for (std::size_t k = 2; k <= start; k += 2) {
        norm += 2.0 * tmp[k];
    }
    for (std::size_t k = 0; k <= kmax; ++k) {
        j[k] = tmp[k] / norm;
    }
    return j;
}

ChebyshevExpansion::ChebyshevExpansion(SpectralBounds bounds, double tau, double tol)
    : tau_(tau),
      center_(0.5 * (bounds.hi + bounds.lo)),
      half_width_(0.5 * (bounds.hi - bounds.lo)) {
    if (bounds.hi < bounds.lo) {
        throw std::invalid_argument("ChebyshevExpansion: empty spectral interval");
    }
    phase_ = std::exp(-kI * center_ * tau);
    const double x = half_width_ * std::abs(tau);
    if (x < 1e-15) {
        coeffs_ = {1.0};
        return;
    }
    const auto kmax = static_cast<std::size_t>(x + 30.0 + 8.0 * std::cbrt(x));
    const auto j = bessel_j_sequence(x, kmax);

    std::size_t last = 1;
    for (std::size_t k = 0; k <= kmax; ++k) {
        if (std::abs(j[k]) > tol) {
            last = std::max(last, k);
        }
    }
    // exp(-i x y) = J_0(x) + 2 sum (-i)^k J_k(x) T_k(y); tau < 0 flips the sign of i.
    const cplx minus_i = tau >= 0.0 ? -kI : kI;
    coeffs_.resize(last + 1);
    cplx power = 1.0;
    for (std::size_t k = 0; k <= last; ++k) {
        coeffs_[k] = (k == 0 ? 1.0 : 2.0) * power * j[k];
        power *= minus_i;
    }
}

CMatrix expm(const CMatrix& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("expm: matrix must be square");
    }
    return a.exp();
}

CMatrix exp_i_hermitian(const CMatrix& k, double scale) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(k);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("exp_i_hermitian: eigendecomposition failed");
    }
    const auto& v = solver.eigenvectors();
    CVector phases = (kI * scale * solver.eigenvalues().cast<cplx>()).array().exp();
    return v * phases.asDiagonal() * v.adjoint();
}

double max_abs(const CMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

} // namespace rabicat
