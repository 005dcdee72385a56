#include "rabicat/protocols.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rabicat::protocols {

namespace {

bool is_multiple(double value, double step) {
    const double r = value / step;
    return std::abs(r - std::round(r)) < 1e-9 * std::max(1.0, std::abs(r));
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << what << " must be positive and finite (got " << v << ")";
        throw std::invalid_argument(msg.str());
    }
}

} // namespace

Protocol build_sinusoidal_amplification(double g0, double n_periods, double delta, double omega) {
    require_positive(omega, "omega");
    if (n_periods < 0.0 || !is_multiple(n_periods, 0.5)) {
        throw std::invalid_argument(
            "build_sinusoidal_amplification: n_periods must be a non-negative multiple of 1/2");
    }
    Protocol p;
    p.name = "sinusoidal";
    p.schedule.omega = omega;
    p.gtilde_initial = g0;
    if (n_periods == 0.0) {
        p.predicted_gtilde = g0;
        return p;
    }
    const double t_end = n_periods * 2.0 * M_PI / omega;
    p.schedule.segments.push_back(
        {0.0, t_end, model::Cosine{g0, omega, 0.0}, model::Constant{delta}});
    // e^{-i w t} g0 (1 + i w t / 2 + (e^{2 i w t} - 1) / 4), the last term
    // vanishing at half-period multiples.
    p.predicted_gtilde = std::exp(-kI * omega * t_end) * g0 * (1.0 + kI * omega * t_end / 2.0);
    return p;
}

Protocol build_pulse_train_amplification(double g0, double n_periods,
                                         const PulseTrainOptions& options) {
    require_positive(options.omega, "omega");
    require_positive(n_periods, "n_periods");
    require_positive(options.interval_periods, "interval_periods");
    if (options.axis == model::Axis::x) {
        throw std::invalid_argument(
            "build_pulse_train_amplification: sigma_x pulses do not flip g and cannot amplify; "
            "use axis y or z");
    }
    if (!is_multiple(n_periods, options.interval_periods)) {
        std::ostringstream msg;
        msg << "build_pulse_train_amplification: interval " << options.interval_periods
            << " periods does not divide the duration " << n_periods << " periods";
        throw std::invalid_argument(msg.str());
    }
    if (options.first_pulse_periods < 0.0 || options.first_pulse_periods >= n_periods) {
        throw std::invalid_argument(
            "build_pulse_train_amplification: first pulse must lie inside the schedule");
    }
    const double period = 2.0 * M_PI / options.omega;
    Protocol p;
    p.name = "pulse_train";
    p.schedule.omega = options.omega;
    p.schedule.segments.push_back(
        {0.0, n_periods * period, model::Constant{g0}, model::Constant{options.delta}});
    p.gtilde_initial = g0;

    const auto count = static_cast<std::size_t>(
        std::floor((n_periods - options.first_pulse_periods) / options.interval_periods - 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) {
        const double tp = (options.first_pulse_periods +
                           static_cast<double>(k) * options.interval_periods) * period;
        p.schedule.pulses.push_back({tp, options.axis});
    }

    // Constant effective coupling c on each interval: g~ -> c + (g~ - c) e^{-i w tau}.
    cplx gt = g0;
    double sign = 1.0;
    double t = 0.0;
    std::vector<double> edges;
    for (const auto& pulse : p.schedule.pulses) edges.push_back(pulse.time);
    edges.push_back(n_periods * period);
    for (double edge : edges) {
        const double c = sign * g0;
        gt = c + (gt - c) * std::exp(-kI * options.omega * (edge - t));
        t = edge;
        sign = -sign;
    }
    p.predicted_gtilde = gt;
    return p;
}

Protocol build_echo(double g0, double delta, double free_periods, std::size_t n_pulses,
                    double omega) {
    require_positive(omega, "omega");
    require_positive(free_periods, "free_periods");
    const double interval = free_periods / static_cast<double>(n_pulses + 1);
    if (!is_multiple(interval, 1.0)) {
        std::ostringstream msg;
        msg << "build_echo: " << free_periods << " periods split into " << n_pulses + 1
            << " intervals of " << interval
            << " periods; each interval must be a whole number of periods for the first-order "
               "dephasing to cancel";
        throw std::invalid_argument(msg.str());
    }
    const double period = 2.0 * M_PI / omega;
    Protocol p;
    p.name = "echo";
    p.schedule.omega = omega;
    p.schedule.segments.push_back(
        {0.0, free_periods * period, model::Constant{g0}, model::Constant{delta}});
    for (std::size_t k = 1; k <= n_pulses; ++k) {
        p.schedule.pulses.push_back({static_cast<double>(k) * interval * period, model::Axis::x});
    }
    p.gtilde_initial = g0;
    p.predicted_gtilde = g0;
    return p;
}

double speedup_estimate(double omega, double chi_qs, double n_periods) {
    require_positive(omega, "omega");
    require_positive(chi_qs, "chi_qs");
    require_positive(n_periods, "n_periods");
    return (M_PI / chi_qs) / (n_periods * 2.0 * M_PI / omega);
}

} // namespace rabicat::protocols
