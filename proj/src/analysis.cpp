#include "rabicat/analysis.hpp"

#include "rabicat/errors.hpp"
#include "rabicat/warnings.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

namespace rabicat::analysis {

namespace {

CVector unit(const SystemState& s, const char* which) {
    const double n = s.norm();
    if (n == 0.0) {
        throw NullStateError(std::string("fidelity: state ") + which + " is zero");
    }
    if (std::abs(n - 1.0) > 1e-6 && !s.unnormalized) {
        std::ostringstream msg;
        msg << "fidelity: state " << which << " has norm " << n << "; normalizing";
        warn(msg.str());
    }
    return s.amplitudes / n;
}

double cat_fidelity(const SystemState& target, const CVector& unit_target, cplx alpha) {
    if (std::abs(alpha) < 1e-300) {
        alpha = 0.0;
    }
    const auto cat = fock::cat_state(alpha, +1, target.dim_osc);
    return std::abs(cat.amplitudes.dot(unit_target));
}

// Golden-section maximization of f on [lo, hi].
template <class F>
double golden_max(const F& f, double lo, double hi, double tol) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo;
    double b = hi;
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

double trapezoid_2d(const RMatrix& v, const std::vector<double>& q, const std::vector<double>& p) {
    auto weights = [](const std::vector<double>& x) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(x.size()));
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
            const double h = 0.5 * (x[i + 1] - x[i]);
            w(static_cast<Eigen::Index>(i)) += h;
            w(static_cast<Eigen::Index>(i + 1)) += h;
        }
        return w;
    };
    const Eigen::VectorXd wq = weights(q);
    const Eigen::VectorXd wp = weights(p);
    return wp.dot(v * wq);
}

void check_axis(const std::vector<double>& axis, const char* name) {
    if (axis.empty()) {
        throw std::invalid_argument(std::string("wigner: ") + name + " axis is empty");
    }
    for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
        if (!(axis[i + 1] > axis[i])) {
            throw std::invalid_argument(std::string("wigner: ") + name +
                                        " axis must be strictly increasing");
        }
        if (axis[i + 1] - axis[i] > 0.25 + 1e-12) {
            std::ostringstream msg;
            msg << "wigner: " << name << " spacing " << axis[i + 1] - axis[i]
                << " exceeds 0.25 and may alias interference fringes";
            warn(msg.str());
            return;
        }
    }
}

// Pure components as columns, weighted so that W = sum over columns.
WignerGrid wigner_columns(const CMatrix& columns, std::size_t dim_osc,
                          const std::vector<double>& q_axis, const std::vector<double>& p_axis,
                          std::size_t jobs) {
    check_axis(q_axis, "q");
    check_axis(p_axis, "p");
    double reach = 0.0;
    for (double q : {q_axis.front(), q_axis.back()}) {
        for (double p : {p_axis.front(), p_axis.back()}) {
            reach = std::max(reach, std::hypot(q, p));
        }
    }
    if (reach > std::sqrt(2.0 * static_cast<double>(dim_osc))) {
        std::ostringstream msg;
        msg << "wigner: grid reaches radius " << reach << " beyond the reliable region "
            << std::sqrt(2.0 * static_cast<double>(dim_osc)) << " of dim_osc = " << dim_osc;
        warn(msg.str());
    }

    // Pad so that displacing the occupied levels by the largest grid
    // amplitude stays inside the working space.
    Eigen::Index top = 0;
    for (Eigen::Index n = columns.rows() - 1; n >= 0; --n) {
        if (columns.row(n).squaredNorm() > 1e-14) {
            top = n;
            break;
        }
    }
    const double r = std::sqrt(static_cast<double>(top)) + reach / std::sqrt(2.0) + 1.0;
    const auto work = std::max<Eigen::Index>(
        columns.rows(), static_cast<Eigen::Index>(std::ceil(r * r + 6.0 * r + 20.0)));
    CMatrix padded = CMatrix::Zero(work, columns.cols());
    padded.topRows(columns.rows()) = columns;

    Eigen::VectorXd parity(work);
    for (Eigen::Index n = 0; n < work; ++n) {
        parity(n) = (n % 2 == 0) ? 1.0 : -1.0;
    }

    WignerGrid grid;
    grid.q_axis = q_axis;
    grid.p_axis = p_axis;
    grid.values = RMatrix::Zero(static_cast<Eigen::Index>(p_axis.size()),
                                static_cast<Eigen::Index>(q_axis.size()));

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const bool uniform_q = q_axis.size() > 2 &&
        std::abs((q_axis.back() - q_axis.front()) / static_cast<double>(q_axis.size() - 1) -
                 (q_axis[1] - q_axis[0])) < 1e-12;
    const fock::Displacer q_step(-cplx(q_axis.size() > 1 ? q_axis[1] - q_axis[0] : 0.0, 0.0) * inv_sqrt2,
                                 static_cast<std::size_t>(work));

    auto row_task = [&](std::size_t j) {
        CMatrix phi = fock::displace(-cplx(q_axis[0], p_axis[j]) * inv_sqrt2, padded);
        for (std::size_t i = 0; i < q_axis.size(); ++i) {
            if (i > 0) {
                // D(-a - d) = D(-d) D(-a) up to a phase that |.|^2 removes.
                if (uniform_q) {
                    q_step.apply(phi);
                } else {
                    phi = fock::displace(-cplx(q_axis[i] - q_axis[i - 1], 0.0) * inv_sqrt2, phi);
                }
            }
            grid.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
                (parity.transpose() * phi.cwiseAbs2()).sum() / M_PI;
        }
    };

    const std::size_t n_threads = std::max<std::size_t>(1, std::min(jobs, p_axis.size()));
    if (n_threads == 1) {
        for (std::size_t j = 0; j < p_axis.size(); ++j) row_task(j);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t j = t; j < p_axis.size(); j += n_threads) row_task(j);
            });
        }
        for (auto& th : pool) th.join();
    }
    return grid;
}

} // namespace

Projection project_qubit(const SystemState& state, QubitCoeffs qubit) {
    if (state.dim_qubit != 2) {
        throw InvalidDimension("project_qubit: needs a full qubit (x) oscillator state");
    }
    const double qn = std::sqrt(std::norm(qubit.plus) + std::norm(qubit.minus));
    if (qn == 0.0) {
        throw std::invalid_argument("project_qubit: qubit coefficients are zero");
    }
    Projection p;
    p.oscillator.dim_osc = state.dim_osc;
    p.oscillator.dim_qubit = 1;
    p.oscillator.unnormalized = true;
    p.oscillator.leakage = state.leakage;
    p.oscillator.amplitudes =
        (std::conj(qubit.plus) / qn) * state.branch(0) + (std::conj(qubit.minus) / qn) * state.branch(1);
    p.weight = p.oscillator.amplitudes.squaredNorm();
    if (p.weight < 1e-12) {
        std::ostringstream msg;
        msg << "project_qubit: projection weight " << p.weight << " is below 1e-12";
        throw NullStateError(msg.str());
    }
    return p;
}

double fidelity(const SystemState& a, const SystemState& b) {
    if (a.dim() != b.dim() || a.dim_osc != b.dim_osc ||
        a.amplitudes.size() != b.amplitudes.size()) {
        std::ostringstream msg;
        msg << "fidelity: dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
        throw InvalidDimension(msg.str());
    }
    return std::min(1.0, std::abs(unit(a, "a").dot(unit(b, "b"))));
}

double overlap_probability(const SystemState& a, const SystemState& b) {
    const double f = fidelity(a, b);
    return f * f;
}

double cat_size(cplx beta1, cplx beta2) { return std::norm(beta1 - beta2); }

AmplitudeFit extract_amplitude(const SystemState& oscillator, cplx initial_guess, double tol,
                               std::size_t max_sweeps) {
    if (oscillator.dim_qubit != 1) {
        throw InvalidDimension("extract_amplitude: needs an oscillator-only state");
    }
    const CVector target = unit(oscillator, "input");
    double x = initial_guess.real();
    double y = initial_guess.imag();
    double width = 0.5;
    AmplitudeFit fit;
    for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
        // A line search only moves on strict improvement, so flat optima
        // (the vacuum is quartic in alpha) keep the current estimate.
        double best = cat_fidelity(oscillator, target, {x, y});
        double x_new = golden_max(
            [&](double v) { return cat_fidelity(oscillator, target, {v, y}); }, x - width,
            x + width, 0.1 * tol);
        if (const double f = cat_fidelity(oscillator, target, {x_new, y}); f > best) {
            best = f;
        } else {
            x_new = x;
        }
        double y_new = golden_max(
            [&](double v) { return cat_fidelity(oscillator, target, {x_new, v}); }, y - width,
            y + width, 0.1 * tol);
        if (cat_fidelity(oscillator, target, {x_new, y_new}) <= best) {
            y_new = y;
        }
        const double move = std::hypot(x_new - x, y_new - y);
        x = x_new;
        y = y_new;
        fit.sweeps = sweep;
        if (move < tol) {
            fit.alpha = {x, y};
            fit.fidelity = cat_fidelity(oscillator, target, fit.alpha);
            return fit;
        }
        width = std::clamp(4.0 * move, 1e-5, 0.5);
    }
    std::ostringstream msg;
    msg << "extract_amplitude: no convergence to " << tol << " within " << max_sweeps
        << " sweeps (last alpha " << x << " + " << y << "i)";
    throw ConvergenceError(msg.str());
}

std::vector<double> uniform_axis(double lo, double hi, std::size_t count) {
    if (count < 2 || !(hi > lo)) {
        throw std::invalid_argument("uniform_axis: need hi > lo and at least two samples");
    }
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

double WignerGrid::normalization() const { return trapezoid_2d(values, q_axis, p_axis); }

double WignerGrid::purity() const {
    return 2.0 * M_PI * trapezoid_2d(values.cwiseAbs2(), q_axis, p_axis);
}

void WignerGrid::write_csv(std::ostream& out) const {
    out << std::setprecision(10) << "p\\q";
    for (double q : q_axis) out << ',' << q;
    out << '\n';
    for (std::size_t j = 0; j < p_axis.size(); ++j) {
        out << p_axis[j];
        for (std::size_t i = 0; i < q_axis.size(); ++i) {
            out << ',' << values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
        }
        out << '\n';
    }
}

WignerGrid wigner(const SystemState& oscillator, const std::vector<double>& q_axis,
                  const std::vector<double>& p_axis, const WignerOptions& options) {
    if (oscillator.dim_qubit != 1) {
        throw InvalidDimension("wigner: needs an oscillator-only state (project the qubit first)");
    }
    const CVector psi = unit(oscillator, "input");
    return wigner_columns(psi, oscillator.dim_osc, q_axis, p_axis, options.jobs);
}

WignerGrid wigner(const CMatrix& density, const std::vector<double>& q_axis,
                  const std::vector<double>& p_axis, const WignerOptions& options) {
    if (density.rows() != density.cols() || density.rows() < 2) {
        throw InvalidDimension("wigner: density matrix must be square with dimension >= 2");
    }
    const Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (density + density.adjoint()));
    const auto& vals = solver.eigenvalues();
    const double trace = vals.sum();
    if (std::abs(trace - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg << "wigner: density matrix has trace " << trace << "; normalizing";
        warn(msg.str());
    }
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
        if (vals(k) > 1e-14) keep.push_back(k);
    }
    CMatrix cols(density.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        cols.col(static_cast<Eigen::Index>(c)) =
            std::sqrt(vals(keep[c]) / trace) * solver.eigenvectors().col(keep[c]);
    }
    return wigner_columns(cols, static_cast<std::size_t>(density.rows()), q_axis, p_axis,
                          options.jobs);
}

} // namespace rabicat::analysis
