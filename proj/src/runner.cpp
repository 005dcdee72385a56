#include "rabicat/runner.hpp"

#include "rabicat/analysis.hpp"
#include "rabicat/errors.hpp"
#include "rabicat/io.hpp"
#include "rabicat/propagator.hpp"
#include "rabicat/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace rabicat::cli {

namespace {

constexpr double kPeriod = 2.0 * M_PI;

std::string echo_name(std::size_t pulses) {
    if (pulses == 0) return "dephased";
    if (pulses == 1) return "echo";
    return "echo_" + std::to_string(pulses);
}

std::string periods_name(double periods) { return "t" + io::format(periods); }

Checkpoint evaluate(const std::string& name, double t, const SystemState& lab,
                    const model::Schedule& schedule, cplx gtilde0) {
    const double r = 1.0 / std::sqrt(2.0);
    const auto q = model::net_pulse_operator(schedule, schedule.t_start(), t);
    const auto toggled = model::apply_qubit_operator(lab, q.adjoint());
    auto proj = analysis::project_qubit(toggled, {r, r});
    Checkpoint c;
    c.name = name;
    c.time = t;
    c.gtilde = schedule.segments.empty() ? gtilde0 : frame::frame_at(schedule, gtilde0, t).gtilde;
    c.weight = proj.weight;
    c.oscillator = proj.oscillator;
    c.oscillator.amplitudes /= std::sqrt(proj.weight);
    c.oscillator.unnormalized = false;
    c.leakage = lab.leakage;
    const auto cat = fock::cat_state(c.gtilde / schedule.omega, +1, lab.dim_osc);
    c.fidelity = analysis::fidelity(c.oscillator, cat);
    c.overlap_probability = c.fidelity * c.fidelity;
    return c;
}

const Checkpoint* find(const std::vector<Checkpoint>& cps, const std::string& name) {
    for (const auto& c : cps) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

} // namespace

Plan build_plan(const Scenario& sc) {
    Plan plan;
    const auto& p = sc.protocol;
    plan.shared_checkpoints.emplace_back("initial", 0.0);
    switch (p.kind) {
    case ProtocolKind::sinusoidal: {
        if (p.periods == 0.0 && p.hold_periods == 0.0) {
            throw std::invalid_argument("sinusoidal protocol: periods and hold_periods are both zero");
        }
        const auto drive = protocols::build_sinusoidal_amplification(sc.g0, p.periods, sc.delta);
        const double t_drive = drive.schedule.t_final();
        plan.shared_until = t_drive;
        if (p.periods > 0.0) plan.shared_checkpoints.emplace_back("amplified", t_drive);
        if (p.hold_periods <= 0.0) {
            plan.variants.push_back({"amplified", drive.schedule, {}});
            break;
        }
        const double g_hold =
            p.hold_coupling == HoldCoupling::drive ? sc.g0 * std::cos(kPeriod * p.periods) : 0.0;
        for (std::size_t k : p.echo_pulses) {
            Variant v{echo_name(k), drive.schedule, {}};
            v.schedule.append(protocols::build_echo(g_hold, sc.delta, p.hold_periods, k).schedule);
            v.checkpoints.emplace_back(v.name, v.schedule.t_final());
            plan.variants.push_back(std::move(v));
        }
        break;
    }
    case ProtocolKind::pulse_train:
        for (auto axis : p.axes) {
            protocols::PulseTrainOptions opt;
            opt.axis = axis;
            opt.interval_periods = p.interval_periods;
            opt.first_pulse_periods = p.first_pulse_periods;
            opt.delta = sc.delta;
            const auto pt = protocols::build_pulse_train_amplification(sc.g0, p.periods, opt);
            const std::string name = "sigma_" + model::to_string(axis);
            plan.variants.push_back({name, pt.schedule, {{name, pt.schedule.t_final()}}});
        }
        break;
    case ProtocolKind::echo:
        for (std::size_t k : p.echo_pulses) {
            const auto e = protocols::build_echo(sc.g0, sc.delta, p.free_periods, k);
            plan.variants.push_back({echo_name(k), e.schedule, {{echo_name(k), e.schedule.t_final()}}});
        }
        break;
    case ProtocolKind::custom: {
        Variant v{"final", sc.custom, {}};
        v.schedule.validate();
        std::vector<double> cps = sc.outputs.checkpoints;
        std::sort(cps.begin(), cps.end());
        for (double c : cps) {
            const double t = c * kPeriod;
            if (t < 0.0 || t > v.schedule.t_final() + 1e-12) {
                std::ostringstream msg;
                msg << "checkpoint at " << c << " periods lies outside the schedule";
                throw ValidationError({msg.str()});
            }
            v.checkpoints.emplace_back(periods_name(c), t);
        }
        v.checkpoints.emplace_back("final", v.schedule.t_final());
        plan.variants.push_back(std::move(v));
        break;
    }
    }
    if (plan.variants.empty()) {
        throw ValidationError({"protocol produces no runs"});
    }
    for (const auto& v : plan.variants) v.schedule.validate();
    const auto& first = plan.variants.front().schedule;
    plan.gtilde0 = sc.initial.gtilde ? *sc.initial.gtilde : first.g_at(0.0);
    return plan;
}

std::vector<frame::DynamicalFrame> sample_trajectory(const Plan& plan, std::size_t samples_per_period) {
    const auto& s = plan.variants.front().schedule;
    const auto n = static_cast<std::size_t>(
        std::ceil(s.t_final() / s.period() * static_cast<double>(samples_per_period) - 1e-9));
    std::vector<double> times;
    for (std::size_t k = 0; k <= n; ++k) {
        times.push_back(std::min(s.t_final(), s.t_final() * static_cast<double>(k) / static_cast<double>(n)));
    }
    return frame::gtilde_trajectory(s, plan.gtilde0, times);
}

std::size_t choose_dim(const Scenario& sc, const Plan& plan) {
    if (sc.numerics.dim != 0) {
        if (sc.numerics.dim < 2) throw ValidationError({"numerics.dim must be at least 2"});
        return sc.numerics.dim;
    }
    double amp = std::abs(plan.gtilde0);
    for (const auto& f : sample_trajectory(plan, 16)) amp = std::max(amp, std::abs(f.gtilde));
    return fock::recommended_dim(amp);
}

RunResult run_frame(const Scenario& sc) {
    const auto plan = build_plan(sc);
    RunResult r;
    r.schedule = plan.variants.front().schedule;
    r.trajectory = sample_trajectory(plan, sc.outputs.trajectory_samples);
    const auto& last = r.trajectory.back();
    r.summary.emplace_back("gtilde_abs", std::abs(last.gtilde));
    r.summary.emplace_back("gtilde_re", last.gtilde.real());
    r.summary.emplace_back("gtilde_im", last.gtilde.imag());
    r.summary.emplace_back("phi_global", last.phi_global);
    r.summary.emplace_back("cat_size", analysis::cat_size(last.gtilde, -last.gtilde));
    r.summary.emplace_back("t_final_periods", last.time / kPeriod);
    return r;
}

RunResult run_scenario(const Scenario& sc) {
    const auto plan = build_plan(sc);
    RunResult r;
    r.schedule = plan.variants.front().schedule;
    r.dim_osc = choose_dim(sc, plan);
    r.trajectory = sample_trajectory(plan, sc.outputs.trajectory_samples);

    // Requested outputs must name real checkpoints.
    std::vector<std::string> known;
    for (const auto& c : plan.shared_checkpoints) known.push_back(c.first);
    for (const auto& v : plan.variants)
        for (const auto& c : v.checkpoints) known.push_back(c.first);
    std::vector<std::string> problems;
    for (const auto* list : {&sc.outputs.wigner, &sc.outputs.states}) {
        for (const auto& n : *list) {
            if (std::find(known.begin(), known.end(), n) == known.end()) {
                std::ostringstream msg;
                msg << "output requested for unknown checkpoint '" << n << "' (available:";
                for (const auto& k : known) msg << ' ' << k;
                msg << ')';
                problems.push_back(msg.str());
            }
        }
    }
    if (!problems.empty()) throw ValidationError(problems);

    const auto& first = plan.variants.front().schedule;
    const model::HamiltonianParams p0{first.g_at(0.0), first.delta_at(0.0), first.omega, r.dim_osc};
    SystemState state = sc.initial.kind == InitialKind::ground
                            ? propagator::ground_state(p0)
                            : frame::dynamical_eigenstate(plan.gtilde0, sc.initial.n, sc.initial.branch,
                                                          r.dim_osc, first.omega);
    const propagator::EvolveOptions opt{sc.numerics.steps_per_period};

    double t = 0.0;
    for (const auto& [name, tc] : plan.shared_checkpoints) {
        state = propagator::evolve(state, first, t, tc, opt);
        t = tc;
        r.checkpoints.push_back(evaluate(name, tc, state, first, plan.gtilde0));
    }
    const SystemState shared = state;
    const double t_shared = t;
    for (const auto& v : plan.variants) {
        SystemState s = shared;
        double tv = t_shared;
        for (const auto& [name, tc] : v.checkpoints) {
            s = propagator::evolve(s, v.schedule, tv, tc, opt);
            tv = tc;
            r.checkpoints.push_back(evaluate(name, tc, s, v.schedule, plan.gtilde0));
        }
    }

    auto& sum = r.summary;
    double leakage = 0.0;
    for (const auto& c : r.checkpoints) {
        const std::string key =
            c.name == "initial" ? (sc.initial.kind == InitialKind::ground ? "fid_ground_cat" : "fid_initial")
                                : "fid_" + c.name;
        sum.emplace_back(key, c.fidelity);
        leakage = std::max(leakage, c.leakage);
    }
    const auto* amp = find(r.checkpoints, "amplified");
    for (const auto& c : r.checkpoints) {
        if (amp != nullptr && c.name.rfind("echo", 0) == 0) {
            sum.emplace_back("fid_" + c.name + "_vs_amplified", analysis::fidelity(c.oscillator, amp->oscillator));
        }
    }
    const auto& last = r.trajectory.back();
    sum.emplace_back("gtilde_abs", std::abs(last.gtilde));
    sum.emplace_back("gtilde_re", last.gtilde.real());
    sum.emplace_back("gtilde_im", last.gtilde.imag());
    sum.emplace_back("cat_size", analysis::cat_size(last.gtilde, -last.gtilde));
    sum.emplace_back("dim_osc", static_cast<double>(r.dim_osc));
    sum.emplace_back("steps_per_period", static_cast<double>(sc.numerics.steps_per_period));
    sum.emplace_back("max_leakage", leakage);
    return r;
}

void write_outputs(const Scenario& sc, const RunResult& r, const std::filesystem::path& dir,
                   std::size_t jobs) {
    std::filesystem::create_directories(dir);
    {
        std::ostringstream out;
        io::write_summary(out, r.summary);
        io::write_text(dir / "summary.txt", out.str());
    }
    {
        std::ostringstream out;
        out << "t_over_T,re,im,abs,g_eff\n";
        for (const auto& f : r.trajectory) {
            const double g = r.schedule.segments.empty() ? 0.0 : f.signs.g * r.schedule.g_at(f.time);
            out << io::format(f.time / kPeriod) << ',' << io::format(f.gtilde.real()) << ','
                << io::format(f.gtilde.imag()) << ',' << io::format(std::abs(f.gtilde)) << ','
                << io::format(g) << '\n';
        }
        io::write_text(dir / "gtilde.csv", out.str());
    }
    if (!r.checkpoints.empty()) {
        std::ostringstream out;
        out << "checkpoint,t_over_T,gtilde_re,gtilde_im,gtilde_abs,fidelity,overlap_probability,"
               "projection_weight,leakage\n";
        for (const auto& c : r.checkpoints) {
            out << c.name << ',' << io::format(c.time / kPeriod) << ',' << io::format(c.gtilde.real())
                << ',' << io::format(c.gtilde.imag()) << ',' << io::format(std::abs(c.gtilde)) << ','
                << io::format(c.fidelity) << ',' << io::format(c.overlap_probability) << ','
                << io::format(c.weight) << ',' << io::format(c.leakage) << '\n';
        }
        io::write_text(dir / "fidelities.csv", out.str());
    }
    const auto q = analysis::uniform_axis(sc.outputs.wigner_q.lo, sc.outputs.wigner_q.hi, sc.outputs.wigner_q.count);
    const auto p = analysis::uniform_axis(sc.outputs.wigner_p.lo, sc.outputs.wigner_p.hi, sc.outputs.wigner_p.count);
    for (const auto& name : sc.outputs.wigner) {
        const auto* c = find(r.checkpoints, name);
        if (c == nullptr) continue;
        const auto grid = analysis::wigner(c->oscillator, q, p, {jobs});
        std::ostringstream out;
        grid.write_csv(out);
        io::write_text(dir / ("wigner_" + name + ".csv"), out.str());
    }
    for (const auto& name : sc.outputs.states) {
        const auto* c = find(r.checkpoints, name);
        if (c == nullptr) continue;
        io::write_state(dir / ("state_" + name + ".txt"), c->oscillator, c->time / kPeriod);
    }
}

} // namespace rabicat::cli
