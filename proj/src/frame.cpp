#include "rabicat/frame.hpp"

#include "rabicat/errors.hpp"
#include "rabicat/warnings.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace rabicat::frame {

namespace {

constexpr double kTimeEps = 1e-12;

// int_{t0}^{t1} e^{i k s} ds
cplx oscillatory_integral(double k, double t0, double t1) {
    const double tau = t1 - t0;
    const cplx x = kI * k * tau;
    cplx ratio; // (e^x - 1) / x
    if (std::abs(x) < 1e-3) {
        ratio = 1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0 + x * x * x * x / 120.0;
    } else {
        ratio = (std::exp(x) - 1.0) / x;
    }
    return std::exp(kI * k * t0) * tau * ratio;
}

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGlNodes{0.1834346424956498, 0.5255324099163290,
                                         0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGlWeights{0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

const model::Segment& segment_for(const model::Schedule& s, double a, double b) {
    return s.segment_at(0.5 * (a + b));
}

// Advances `f` to time t through every breakpoint, accumulating the phase.
void advance(const model::Schedule& schedule, DynamicalFrame& f, double t) {
    if (t < f.time - kTimeEps) {
        throw std::invalid_argument("frame: sample times must be ascending");
    }
    const double omega = schedule.omega;
    const auto pts = schedule.breakpoints(f.time, t);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        if (b - a <= kTimeEps) {
            continue;
        }
        const auto& seg = segment_for(schedule, a, b);
        const double sign = schedule.signs_at(a).g;
        const cplx g0 = f.gtilde;

        const double max_chunk = schedule.period() / 8.0;
        const auto chunks = static_cast<std::size_t>(std::ceil((b - a) / max_chunk - 1e-9));
        const double h = (b - a) / static_cast<double>(std::max<std::size_t>(chunks, 1));
        double phase = 0.0;
        for (std::size_t c = 0; c < std::max<std::size_t>(chunks, 1); ++c) {
            const double lo = a + h * static_cast<double>(c);
            const double mid = lo + 0.5 * h;
            for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
                for (double side : {-1.0, 1.0}) {
                    const double s = mid + side * 0.5 * h * kGlNodes[k];
                    const cplx gt = gtilde_step(seg.g, seg.t_start, seg.t_end, a, s, g0, omega, sign);
                    const double g = sign * model::evaluate(seg.g, s, seg.t_start, seg.t_end);
                    phase += 0.5 * h * kGlWeights[k] * (g * gt.real() / omega - 0.5 * omega);
                }
            }
        }
        f.phi_global += phase;
        f.gtilde = gtilde_step(seg.g, seg.t_start, seg.t_end, a, b, g0, omega, sign);
    }
    f.time = t;
    f.signs = schedule.signs_at(t);
}

CMatrix fock_columns(std::size_t dim_osc, std::size_t n_max) {
    return CMatrix::Identity(static_cast<Eigen::Index>(dim_osc), static_cast<Eigen::Index>(n_max));
}

void check_basis_size(std::size_t n_max, std::size_t dim_osc) {
    if (dim_osc < 2) {
        throw InvalidDimension("frame: dim_osc must be at least 2");
    }
    if (n_max == 0 || n_max > dim_osc) {
        std::ostringstream msg;
        msg << "frame: n_max = " << n_max << " must lie in [1, dim_osc = " << dim_osc << "]";
        throw InvalidDimension(msg.str());
    }
}

void warn_truncation(cplx beta, std::size_t dim_osc) {
    const double tail = fock::coherent_tail(beta, dim_osc);
    if (tail > 1e-8) {
        std::ostringstream msg;
        msg << "frame amplitude |g~/omega| = " << std::abs(beta) << " leaves tail probability "
            << tail << " beyond dim_osc = " << dim_osc;
        warn(msg.str());
    }
}

// (1/2) D(-beta)^dag D(beta) restricted to the first n_max Fock columns,
// together with the displaced columns themselves.
struct DisplacedColumns {
    cplx beta{0.0};
    CMatrix minus_shift; // D(-beta) columns (plus branch)
    CMatrix plus_shift;  // D(+beta) columns (minus branch)
    CMatrix overlap;     // (1/2) minus_shift^dag plus_shift
};

DisplacedColumns displaced_columns(cplx beta, std::size_t dim_osc, std::size_t n_max) {
    DisplacedColumns d;
    d.beta = beta;
    const CMatrix e = fock_columns(dim_osc, n_max);
    d.minus_shift = fock::displace(-beta, e);
    d.plus_shift = fock::displace(beta, e);
    d.overlap = 0.5 * d.minus_shift.adjoint() * d.plus_shift;
    return d;
}

CMatrix assemble_sigma_z(const CMatrix& overlap, double t, double omega) {
    const auto n = overlap.rows();
    CVector phase(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        phase(k) = std::exp(-kI * static_cast<double>(k) * omega * t);
    }
    // Rows N', columns N: conj(p_N') p_N (s G + s' G^dag).
    const CMatrix g = phase.conjugate().asDiagonal() * overlap * phase.asDiagonal();
    const CMatrix gh = g.adjoint();
    CMatrix m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = g + gh;
    m.topRightCorner(n, n) = -g + gh;
    m.bottomLeftCorner(n, n) = g - gh;
    m.bottomRightCorner(n, n) = -g - gh;
    return m;
}

} // namespace

cplx gtilde_step(const model::Waveform& g, double seg_start, double seg_end, double t0, double t1,
                 cplx gtilde0, double omega, double sign) {
    const double tau = t1 - t0;
    const cplx decay = std::exp(-kI * omega * tau);
    const cplx free = gtilde0 * decay;
    if (std::abs(tau) <= 0.0) {
        return gtilde0;
    }
    return std::visit(
        [&](const auto& w) -> cplx {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, model::Constant>) {
                return free + sign * w.value * (1.0 - decay);
            } else if constexpr (std::is_same_v<W, model::Linear>) {
                const double a = sign * model::evaluate(w, t0, seg_start, seg_end);
                const double len = seg_end - seg_start;
                const double slope = len > 0.0 ? sign * (w.v1 - w.v0) / len : 0.0;
                return free + a * (1.0 - decay) + slope * tau + kI * slope * (1.0 - decay) / omega;
            } else {
                const double amp = sign * w.amplitude;
                const cplx drive = std::exp(kI * w.phase) * oscillatory_integral(omega + w.frequency, t0, t1) +
                                   std::exp(-kI * w.phase) * oscillatory_integral(omega - w.frequency, t0, t1);
                return free + kI * omega * std::exp(-kI * omega * t1) * (0.5 * amp) * drive;
            }
        },
        g);
}

std::vector<DynamicalFrame> gtilde_trajectory(const model::Schedule& schedule, cplx gtilde0,
                                              const std::vector<double>& sample_times) {
    schedule.validate();
    DynamicalFrame f;
    f.gtilde = gtilde0;
    f.time = schedule.t_start();
    std::vector<DynamicalFrame> out;
    out.reserve(sample_times.size());
    for (double t : sample_times) {
        if (t < schedule.t_start() - kTimeEps || t > schedule.t_final() + kTimeEps) {
            std::ostringstream msg;
            msg << "gtilde_trajectory: sample time " << t << " outside the schedule";
            throw std::out_of_range(msg.str());
        }
        advance(schedule, f, t);
        out.push_back(f);
    }
    return out;
}

DynamicalFrame frame_at(const model::Schedule& schedule, cplx gtilde0, double t) {
    return gtilde_trajectory(schedule, gtilde0, {t}).front();
}

SystemState dynamical_eigenstate(cplx gtilde, std::size_t n, int branch, std::size_t dim_osc,
                                 double omega) {
    if (branch != 1 && branch != -1) {
        throw std::invalid_argument("dynamical_eigenstate: branch must be +1 or -1");
    }
    check_basis_size(n + 1, dim_osc);
    const cplx beta = gtilde / omega;
    warn_truncation(beta, dim_osc);
    CVector fock = CVector::Zero(static_cast<Eigen::Index>(dim_osc));
    fock(static_cast<Eigen::Index>(n)) = 1.0;
    const double s = 1.0 / std::sqrt(2.0);
    return fock::tensor_branches(s * fock::displace(-beta, fock),
                                 (s * branch) * fock::displace(beta, fock));
}

CMatrix frame_basis(cplx gtilde, double t, std::size_t n_max, std::size_t dim_osc, double omega,
                    double phi_global) {
    check_basis_size(n_max, dim_osc);
    const cplx beta = gtilde / omega;
    warn_truncation(beta, dim_osc);
    const auto d = static_cast<Eigen::Index>(dim_osc);
    const auto n = static_cast<Eigen::Index>(n_max);
    const auto cols = displaced_columns(beta, dim_osc, n_max);
    CVector phase(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        phase(k) = std::exp(kI * (phi_global - static_cast<double>(k) * omega * t)) / std::sqrt(2.0);
    }
    CMatrix b(2 * d, 2 * n);
    b.topLeftCorner(d, n) = cols.minus_shift * phase.asDiagonal();
    b.topRightCorner(d, n) = cols.minus_shift * phase.asDiagonal();
    b.bottomLeftCorner(d, n) = cols.plus_shift * phase.asDiagonal();
    b.bottomRightCorner(d, n) = -cols.plus_shift * phase.asDiagonal();
    return b;
}

CMatrix SigmaZMatrix::block(int row_branch, int col_branch) const {
    const auto n = static_cast<Eigen::Index>(n_max);
    return full.block(row_branch > 0 ? 0 : n, col_branch > 0 ? 0 : n, n, n);
}

SigmaZMatrix sigma_z_matrix(cplx gtilde, double t, std::size_t n_max, std::size_t dim_osc,
                            double omega) {
    check_basis_size(n_max, dim_osc);
    if (2 * n_max > dim_osc) {
        warn("sigma_z_matrix: n_max exceeds dim_osc / 2, high-N elements lack headroom");
    }
    const auto cols = displaced_columns(gtilde / omega, dim_osc, n_max);
    return {assemble_sigma_z(cols.overlap, t, omega), t, gtilde, n_max};
}

CMatrix first_order_propagator(const model::Schedule& schedule, cplx gtilde0, double t,
                               const FirstOrderOptions& options) {
    schedule.validate();
    check_basis_size(options.n_max, options.dim_osc);
    if (options.nodes_per_period < 64) {
        throw std::invalid_argument("first_order_propagator: need at least 64 nodes per period");
    }
    const double omega = schedule.omega;
    const auto n = static_cast<Eigen::Index>(options.n_max);
    CMatrix k = CMatrix::Zero(2 * n, 2 * n);

    DisplacedColumns cache;
    bool cached = false;
    auto overlap_at = [&](cplx gtilde) -> const CMatrix& {
        const cplx beta = gtilde / omega;
        if (!cached || std::abs(beta - cache.beta) > 1e-15) {
            cache = displaced_columns(beta, options.dim_osc, options.n_max);
            cached = true;
        }
        return cache.overlap;
    };

    double delta_max = 0.0;
    DynamicalFrame f;
    f.gtilde = gtilde0;
    f.time = schedule.t_start();
    const auto pts = schedule.breakpoints(schedule.t_start(), t);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        if (b - a <= kTimeEps) {
            continue;
        }
        const auto& seg = segment_for(schedule, a, b);
        const auto signs = schedule.signs_at(a);
        const double per_period = static_cast<double>(options.nodes_per_period);
        auto intervals = static_cast<std::size_t>(
            std::ceil((b - a) / schedule.period() * per_period - 1e-9));
        intervals = std::max<std::size_t>(intervals + intervals % 2, 2);
        const double h = (b - a) / static_cast<double>(intervals);
        for (std::size_t j = 0; j <= intervals; ++j) {
            const double s = a + h * static_cast<double>(j);
            const double w = (j == 0 || j == intervals) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
            const double delta = signs.delta * model::evaluate(seg.delta, s, seg.t_start, seg.t_end);
            delta_max = std::max(delta_max, std::abs(delta));
            if (delta == 0.0) {
                continue;
            }
            const cplx gt = gtilde_step(seg.g, seg.t_start, seg.t_end, a, s, f.gtilde, omega, signs.g);
            k += (w * h / 3.0 * delta) * assemble_sigma_z(overlap_at(gt), s, omega);
        }
        f.gtilde = gtilde_step(seg.g, seg.t_start, seg.t_end, a, b, f.gtilde, omega, signs.g);
    }
    if (delta_max > 0.3 * omega) {
        warn("first_order_propagator: |Delta| / omega exceeds 0.3, first-order theory is unreliable");
    }
    // Hermitian part only; the quadrature of a Hermitian integrand is Hermitian
    // up to rounding.
    const CMatrix herm = 0.5 * (k + k.adjoint());
    CMatrix j = exp_i_hermitian(herm, 0.5);
    const double defect =
        max_abs(j.adjoint() * j - CMatrix::Identity(2 * n, 2 * n));
    if (defect > 1e-8) {
        std::ostringstream msg;
        msg << "first_order_propagator: result deviates from unitarity by " << defect;
        throw InternalConsistencyError(msg.str());
    }
    return j;
}

Expansion expand_in_frame(const SystemState& state, cplx gtilde, double t, std::size_t n_max,
                          double omega, double phi_global, double max_residual) {
    if (state.dim_qubit != 2) {
        throw InvalidDimension("expand_in_frame: needs a full qubit (x) oscillator state");
    }
    const CMatrix b = frame_basis(gtilde, t, n_max, state.dim_osc, omega, phi_global);
    Expansion e;
    e.coeffs = b.adjoint() * state.amplitudes;
    e.residual = (state.amplitudes - b * e.coeffs).norm();
    if (e.residual > max_residual) {
        std::ostringstream msg;
        msg << "expand_in_frame: reconstruction residual " << e.residual << " exceeds "
            << max_residual << " (raise n_max or dim_osc)";
        throw IncompleteBasisError(msg.str(), e.residual);
    }
    return e;
}

SystemState reassemble(const CVector& coeffs, cplx gtilde, double t, std::size_t dim_osc,
                       double omega, double phi_global) {
    if (coeffs.size() % 2 != 0) {
        throw InvalidDimension("reassemble: coefficient vector must hold both branches");
    }
    const auto n_max = static_cast<std::size_t>(coeffs.size() / 2);
    const CMatrix b = frame_basis(gtilde, t, n_max, dim_osc, omega, phi_global);
    SystemState s;
    s.amplitudes = b * coeffs;
    s.dim_osc = dim_osc;
    s.dim_qubit = 2;
    return s;
}

SystemState predict_frame_state(const model::Schedule& schedule, cplx gtilde0, std::size_t n,
                                int branch, double t, std::size_t dim_osc) {
    const auto f = frame_at(schedule, gtilde0, t);
    SystemState s = dynamical_eigenstate(f.gtilde, n, branch, dim_osc, schedule.omega);
    s.amplitudes *= std::exp(kI * (f.phi_global - static_cast<double>(n) * schedule.omega * t));
    return model::apply_qubit_operator(s, model::net_pulse_operator(schedule, schedule.t_start(), t));
}

SystemState predict_first_order(const model::Schedule& schedule, cplx gtilde0,
                                const SystemState& initial, double t,
                                const FirstOrderOptions& options) {
    const double omega = schedule.omega;
    const double t0 = schedule.t_start();
    const auto c0 = expand_in_frame(initial, gtilde0, t0, options.n_max, omega);
    const CMatrix j = first_order_propagator(schedule, gtilde0, t, options);
    const auto f = frame_at(schedule, gtilde0, t);
    SystemState s = reassemble(j * c0.coeffs, f.gtilde, t, options.dim_osc, omega, f.phi_global);
    return model::apply_qubit_operator(s, model::net_pulse_operator(schedule, t0, t));
}

} // namespace rabicat::frame
