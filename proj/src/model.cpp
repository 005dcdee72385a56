#include "rabicat/model.hpp"

#include "rabicat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rabicat::model {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kTimeEps = 1e-12;

} // namespace

double evaluate(const Waveform& w, double t, double t_start, double t_end) {
    return std::visit(
        overloaded{
            [](const Constant& c) { return c.value; },
            [t](const Cosine& c) { return c.amplitude * std::cos(c.frequency * t + c.phase); },
            [=](const Linear& l) {
                const double len = t_end - t_start;
                if (len <= 0.0) {
                    return l.v0;
                }
                return l.v0 + (l.v1 - l.v0) * (t - t_start) / len;
            },
        },
        w);
}

double max_abs(const Waveform& w) {
    return std::visit(overloaded{
                          [](const Constant& c) { return std::abs(c.value); },
                          [](const Cosine& c) { return std::abs(c.amplitude); },
                          [](const Linear& l) { return std::max(std::abs(l.v0), std::abs(l.v1)); },
                      },
                      w);
}

std::string describe(const Waveform& w) {
    std::ostringstream out;
    std::visit(overloaded{
                   [&](const Constant& c) { out << "constant(" << c.value << ")"; },
                   [&](const Cosine& c) {
                       out << "cosine(" << c.amplitude << ", " << c.frequency << ", " << c.phase
                           << ")";
                   },
                   [&](const Linear& l) { out << "linear(" << l.v0 << ", " << l.v1 << ")"; },
               },
               w);
    return out.str();
}

std::string to_string(Axis axis) {
    switch (axis) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::z: return "z";
    }
    return "?";
}

Axis parse_axis(const std::string& s) {
    if (s == "x") return Axis::x;
    if (s == "y") return Axis::y;
    if (s == "z") return Axis::z;
    throw std::invalid_argument("unknown pulse axis '" + s + "' (expected x, y or z)");
}

Flips effective_flips(Axis axis) {
    switch (axis) {
    case Axis::z: return {true, false};
    case Axis::x: return {false, true};
    case Axis::y: return {true, true};
    }
    return {};
}

double Schedule::t_start() const { return segments.empty() ? 0.0 : segments.front().t_start; }

double Schedule::t_final() const { return segments.empty() ? 0.0 : segments.back().t_end; }

double Schedule::period() const { return 2.0 * M_PI / omega; }

const Segment& Schedule::segment_at(double t) const {
    if (segments.empty()) {
        throw std::out_of_range("Schedule: no segments");
    }
    if (t < t_start() - kTimeEps || t > t_final() + kTimeEps) {
        std::ostringstream msg;
        msg << "Schedule: time " << t << " outside [" << t_start() << ", " << t_final() << "]";
        throw std::out_of_range(msg.str());
    }
    auto it = std::upper_bound(segments.begin(), segments.end(), t,
                               [](double v, const Segment& s) { return v < s.t_end; });
    if (it == segments.end()) {
        return segments.back();
    }
    return *it;
}

double Schedule::g_at(double t) const {
    const auto& s = segment_at(t);
    return evaluate(s.g, t, s.t_start, s.t_end);
}

double Schedule::delta_at(double t) const {
    const auto& s = segment_at(t);
    return evaluate(s.delta, t, s.t_start, s.t_end);
}

FrameSigns Schedule::signs_at(double t, bool strict) const {
    FrameSigns signs;
    for (const auto& p : pulses) {
        const bool counts = strict ? p.time < t - kTimeEps : p.time <= t + kTimeEps;
        if (!counts) {
            continue;
        }
        const auto f = effective_flips(p.axis);
        if (f.flip_g) signs.g = -signs.g;
        if (f.flip_delta) signs.delta = -signs.delta;
    }
    return signs;
}

std::vector<double> Schedule::breakpoints(double t0, double t1) const {
    std::vector<double> pts{t0};
    auto add = [&](double v) {
        if (v > t0 + kTimeEps && v < t1 - kTimeEps) {
            pts.push_back(v);
        }
    };
    for (const auto& s : segments) {
        add(s.t_start);
        add(s.t_end);
    }
    for (const auto& p : pulses) {
        add(p.time);
    }
    pts.push_back(t1);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double a, double b) { return std::abs(a - b) <= kTimeEps; }),
              pts.end());
    return pts;
}

std::vector<std::string> Schedule::violations() const {
    std::vector<std::string> out;
    std::ostringstream msg;
    auto flush = [&] {
        out.push_back(msg.str());
        msg.str({});
    };
    // Times are reported in oscillator periods, 1-based indices.
    const bool has_period = omega > 0.0 && std::isfinite(omega);
    auto at = [&](double t) {
        std::ostringstream s;
        if (has_period) {
            s << t / period() << " T";
        } else {
            s << t;
        }
        return s.str();
    };
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        msg << "omega must be positive and finite (got " << omega << ")";
        flush();
    }
    if (segments.empty()) {
        msg << "schedule is empty: at least one segment is required";
        flush();
        return out;
    }
    if (std::abs(segments.front().t_start) > kTimeEps) {
        msg << "segments must start at t = 0 (first segment starts at "
            << at(segments.front().t_start) << ")";
        flush();
    }
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        if (!(s.t_end > s.t_start)) {
            msg << "segment " << i + 1 << " has non-positive duration [" << at(s.t_start) << ", "
                << at(s.t_end) << "]";
            flush();
        }
        if (i + 1 < segments.size()) {
            const auto& n = segments[i + 1];
            if (n.t_start < s.t_end - kTimeEps) {
                msg << "segments " << i + 1 << " and " << i + 2 << " overlap on ["
                    << at(n.t_start) << ", " << at(s.t_end) << "]";
                flush();
            } else if (n.t_start > s.t_end + kTimeEps) {
                msg << "gap between segments " << i + 1 << " and " << i + 2 << " on ["
                    << at(s.t_end) << ", " << at(n.t_start) << "]";
                flush();
            }
        }
        for (const auto* w : {&s.g, &s.delta}) {
            const double m = max_abs(*w);
            if (!std::isfinite(m)) {
                msg << "segment " << i + 1 << " has a non-finite waveform " << describe(*w);
                flush();
            }
        }
    }
    for (std::size_t i = 0; i < pulses.size(); ++i) {
        const auto& p = pulses[i];
        if (p.time < -kTimeEps || p.time > t_final() + kTimeEps) {
            msg << "pulse " << i + 1 << " at t = " << at(p.time) << " lies outside [0, " << at(t_final())
                << "]";
            flush();
        }
        if (i > 0) {
            const double prev = pulses[i - 1].time;
            if (std::abs(p.time - prev) <= kTimeEps) {
                msg << "pulses " << i << " and " << i + 1 << " are simultaneous at t = " << at(p.time);
                flush();
            } else if (p.time < prev) {
                msg << "pulses must be ordered by time (pulse " << i + 1 << " at " << at(p.time)
                    << " precedes pulse " << i << " at " << at(prev) << ")";
                flush();
            }
        }
    }
    return out;
}

void Schedule::validate() const {
    auto problems = violations();
    if (!problems.empty()) {
        throw ValidationError(std::move(problems));
    }
}

Schedule& Schedule::append(const Schedule& other) {
    const double shift = t_final();
    for (auto s : other.segments) {
        // Cosine waveforms are anchored to absolute time, so they keep their
        // meaning only when the shifted copy compensates in phase.
        if (auto* c = std::get_if<Cosine>(&s.g)) c->phase -= c->frequency * shift;
        if (auto* c = std::get_if<Cosine>(&s.delta)) c->phase -= c->frequency * shift;
        s.t_start += shift;
        s.t_end += shift;
        segments.push_back(s);
    }
    for (auto p : other.pulses) {
        p.time += shift;
        pulses.push_back(p);
    }
    return *this;
}

void validate(const HamiltonianParams& p) {
    if (p.dim_osc < 2) {
        throw InvalidDimension("HamiltonianParams: dim_osc must be at least 2");
    }
    if (!std::isfinite(p.g) || !std::isfinite(p.delta) || !std::isfinite(p.omega)) {
        throw std::invalid_argument("HamiltonianParams: rates must be finite");
    }
}

RMatrix hamiltonian_real(const HamiltonianParams& p) {
    validate(p);
    const auto d = static_cast<Eigen::Index>(p.dim_osc);
    RMatrix h = RMatrix::Zero(2 * d, 2 * d);
    for (Eigen::Index n = 0; n < d; ++n) {
        const double e = p.omega * (static_cast<double>(n) + 0.5);
        h(n, n) = e;
        h(d + n, d + n) = e;
        h(n, d + n) = -0.5 * p.delta;
        h(d + n, n) = -0.5 * p.delta;
        if (n + 1 < d) {
            const double x = p.g * std::sqrt(static_cast<double>(n + 1));
            h(n, n + 1) = x;
            h(n + 1, n) = x;
            h(d + n, d + n + 1) = -x;
            h(d + n + 1, d + n) = -x;
        }
    }
    return h;
}

TruncatedOperator hamiltonian_at(const HamiltonianParams& p) {
    return {p.dim_osc, 2, hamiltonian_real(p).cast<cplx>(), true};
}

void apply_hamiltonian(const HamiltonianParams& p, const CMatrix& in, CMatrix& out) {
    const auto d = static_cast<Eigen::Index>(p.dim_osc);
    const auto cols = in.cols();
    out.resize(2 * d, cols);
    const double half_delta = 0.5 * p.delta;
    for (Eigen::Index c = 0; c < cols; ++c) {
        const cplx* x = in.col(c).data();
        cplx* y = out.col(c).data();
        for (Eigen::Index n = 0; n < d; ++n) {
            const double e = p.omega * (static_cast<double>(n) + 0.5);
            cplx up = e * x[n] - half_delta * x[d + n];
            cplx dn = e * x[d + n] - half_delta * x[n];
            cplx quad_up = 0.0;
            cplx quad_dn = 0.0;
            if (n > 0) {
                const double s = std::sqrt(static_cast<double>(n));
                quad_up += s * x[n - 1];
                quad_dn += s * x[d + n - 1];
            }
            if (n + 1 < d) {
                const double s = std::sqrt(static_cast<double>(n + 1));
                quad_up += s * x[n + 1];
                quad_dn += s * x[d + n + 1];
            }
            y[n] = up + p.g * quad_up;
            y[d + n] = dn - p.g * quad_dn;
        }
    }
}

SpectralBounds hamiltonian_bounds(double g_max, double delta_max, double omega,
                                  std::size_t dim_osc) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const double g = std::abs(g_max);
    for (std::size_t n = 0; n < dim_osc; ++n) {
        const double nd = static_cast<double>(n);
        double radius = 0.5 * std::abs(delta_max);
        if (n > 0) radius += g * std::sqrt(nd);
        if (n + 1 < dim_osc) radius += g * std::sqrt(nd + 1.0);
        const double centre = omega * (nd + 0.5);
        lo = std::min(lo, centre - radius);
        hi = std::max(hi, centre + radius);
    }
    return {lo, hi};
}

Eigen::Matrix2cd pauli(Axis axis) {
    Eigen::Matrix2cd m;
    switch (axis) {
    case Axis::x: m << 1.0, 0.0, 0.0, -1.0; break;
    case Axis::z: m << 0.0, 1.0, 1.0, 0.0; break;
    case Axis::y: m << 0.0, kI, -kI, 0.0; break;
    }
    return m;
}

SystemState apply_qubit_operator(const SystemState& state, const Eigen::Matrix2cd& op) {
    if (state.dim_qubit != 2) {
        throw InvalidDimension("qubit operator needs a full qubit (x) oscillator state");
    }
    const auto d = static_cast<Eigen::Index>(state.dim_osc);
    SystemState out = state;
    const CVector plus = state.amplitudes.head(d);
    const CVector minus = state.amplitudes.tail(d);
    out.amplitudes.head(d) = op(0, 0) * plus + op(0, 1) * minus;
    out.amplitudes.tail(d) = op(1, 0) * plus + op(1, 1) * minus;
    return out;
}

SystemState apply_pulse(const SystemState& state, Axis axis) {
    return apply_qubit_operator(state, pauli(axis));
}

bool pulse_in_window(const Schedule& schedule, double time, double t0, double t1) {
    if (time < t0 - kTimeEps) {
        return false;
    }
    if (time < t1 - kTimeEps) {
        return true;
    }
    return std::abs(time - t1) <= kTimeEps && t1 >= schedule.t_final() - kTimeEps;
}

Eigen::Matrix2cd net_pulse_operator(const Schedule& schedule, double t0, double t1) {
    Eigen::Matrix2cd q = Eigen::Matrix2cd::Identity();
    for (const auto& p : schedule.pulses) {
        if (pulse_in_window(schedule, p.time, t0, t1)) {
            q = pauli(p.axis) * q;
        }
    }
    return q;
}

} // namespace rabicat::model
