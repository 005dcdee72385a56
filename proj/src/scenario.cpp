#include "rabicat/scenario.hpp"

#include "rabicat/errors.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace rabicat::cli {

namespace {

constexpr double kPeriod = 2.0 * M_PI;

int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

[[noreturn]] void fail(const YAML::Node& n, const std::string& field, const std::string& what) {
    throw ParseError(what, line_of(n), field);
}

template <class T>
T scalar(const YAML::Node& n, const std::string& field) {
    if (!n.IsScalar()) {
        fail(n, field, "expected a scalar value");
    }
    try {
        return n.as<T>();
    } catch (const YAML::Exception&) {
        fail(n, field, "cannot interpret '" + n.Scalar() + "'");
    }
}

double finite(const YAML::Node& n, const std::string& field) {
    const double v = scalar<double>(n, field);
    if (!std::isfinite(v)) fail(n, field, "value must be finite");
    return v;
}

std::size_t count(const YAML::Node& n, const std::string& field) {
    const long long v = scalar<long long>(n, field);
    if (v < 0) fail(n, field, "value must be non-negative");
    return static_cast<std::size_t>(v);
}

std::vector<double> numbers(const YAML::Node& n, const std::string& field) {
    if (n.IsScalar()) return {finite(n, field)};
    if (!n.IsSequence()) fail(n, field, "expected a number or a list of numbers");
    std::vector<double> out;
    for (const auto& item : n) out.push_back(finite(item, field));
    return out;
}

// Rejects keys outside `allowed` so that typos surface with a line number.
YAML::Node section(const YAML::Node& root, const std::string& name,
                   const std::set<std::string>& allowed) {
    const YAML::Node n = root[name];
    if (!n) return n;
    if (!n.IsMap()) fail(n, name, "section must be a mapping");
    for (const auto& kv : n) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) fail(kv.first, name + "." + key, "unknown key");
    }
    return n;
}

model::Waveform waveform(const YAML::Node& n, const std::string& field) {
    if (n.IsScalar()) return model::Constant{finite(n, field)};
    if (!n.IsMap() || n.size() != 1) {
        fail(n, field, "waveform must be a number or one of {constant: v}, {cosine: [a, f, phase]}, "
                       "{linear: [v0, v1]}");
    }
    const auto kind = n.begin()->first.as<std::string>();
    const YAML::Node args = n.begin()->second;
    const auto v = numbers(args, field + "." + kind);
    if (kind == "constant" && v.size() == 1) return model::Constant{v[0]};
    if (kind == "linear" && v.size() == 2) return model::Linear{v[0], v[1]};
    if (kind == "cosine" && (v.size() == 2 || v.size() == 3)) {
        // frequency is given in units of omega
        return model::Cosine{v[0], v[1], v.size() == 3 ? v[2] : 0.0};
    }
    fail(args, field, "bad arguments for waveform '" + kind + "'");
}

GridAxis grid_axis(const YAML::Node& n, const std::string& field) {
    const auto v = numbers(n, field);
    if (v.size() != 3 || !(v[1] > v[0]) || v[2] < 2 || v[2] != std::floor(v[2])) {
        fail(n, field, "expected [lo, hi, count] with hi > lo and count >= 2");
    }
    return {v[0], v[1], static_cast<std::size_t>(v[2])};
}

std::vector<std::string> names(const YAML::Node& n, const std::string& field) {
    std::vector<std::string> out;
    if (n.IsScalar()) return {n.Scalar()};
    if (!n.IsSequence()) fail(n, field, "expected a list of names");
    for (const auto& item : n) out.push_back(scalar<std::string>(item, field));
    return out;
}

} // namespace

YAML::Node load_tree(const std::string& path) {
    try {
        return YAML::LoadFile(path);
    } catch (const YAML::BadFile&) {
        throw ParseError("cannot open scenario file '" + path + "'", 0);
    } catch (const YAML::ParserException& e) {
        throw ParseError(e.msg, e.mark.line + 1);
    }
}

void apply_override(YAML::Node& tree, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ParseError("override '" + assignment + "' must look like section.key=value", 0,
                         "--set");
    }
    const std::string path = assignment.substr(0, eq);
    YAML::Node value;
    try {
        value = YAML::Load(assignment.substr(eq + 1));
    } catch (const YAML::ParserException& e) {
        throw ParseError("override value: " + e.msg, 0, path);
    }
    std::vector<std::string> parts;
    std::istringstream in(path);
    for (std::string p; std::getline(in, p, '.');) {
        if (p.empty()) throw ParseError("empty path component in override", 0, path);
        parts.push_back(p);
    }
    YAML::Node cur;
    cur.reset(tree);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        YAML::Node next = cur[parts[i]];
        if (!next) {
            cur[parts[i]] = YAML::Node(YAML::NodeType::Map);
            next = cur[parts[i]];
        }
        if (!next.IsMap()) throw ParseError("override path crosses a non-mapping", 0, path);
        cur.reset(next);
    }
    cur[parts.back()] = value;
}

Scenario interpret(const YAML::Node& root, const std::string& fallback_name) {
    if (!root || !root.IsMap()) {
        throw ParseError("scenario must be a YAML mapping", root ? line_of(root) : 0);
    }
    for (const auto& kv : root) {
        static const std::set<std::string> top{"name", "system", "initial_state", "protocol",
                                               "schedule", "outputs", "numerics"};
        const auto key = kv.first.as<std::string>();
        if (!top.count(key)) fail(kv.first, key, "unknown section");
    }

    Scenario s;
    s.name = root["name"] ? scalar<std::string>(root["name"], "name") : fallback_name;

    if (const auto sys = section(root, "system", {"g0", "delta"})) {
        if (sys["g0"]) s.g0 = finite(sys["g0"], "system.g0");
        if (sys["delta"]) s.delta = finite(sys["delta"], "system.delta");
    }

    if (const auto ini = section(root, "initial_state", {"kind", "gtilde", "n", "branch"})) {
        if (ini["kind"]) {
            const auto k = scalar<std::string>(ini["kind"], "initial_state.kind");
            if (k == "ground") s.initial.kind = InitialKind::ground;
            else if (k == "dynamical") s.initial.kind = InitialKind::dynamical;
            else fail(ini["kind"], "initial_state.kind", "expected ground or dynamical");
        }
        if (ini["gtilde"]) {
            const auto v = numbers(ini["gtilde"], "initial_state.gtilde");
            if (v.size() > 2) fail(ini["gtilde"], "initial_state.gtilde", "expected re or [re, im]");
            s.initial.gtilde = cplx(v[0], v.size() == 2 ? v[1] : 0.0);
        }
        if (ini["n"]) s.initial.n = count(ini["n"], "initial_state.n");
        if (ini["branch"]) {
            const long long b = scalar<long long>(ini["branch"], "initial_state.branch");
            if (b != 1 && b != -1) fail(ini["branch"], "initial_state.branch", "expected +1 or -1");
            s.initial.branch = static_cast<int>(b);
        }
    }

    auto& p = s.protocol;
    if (const auto pr = section(root, "protocol",
                                {"kind", "periods", "hold_periods", "hold_coupling", "echo_pulses",
                                 "free_periods", "axes", "interval", "first_pulse"})) {
        if (pr["kind"]) {
            const auto k = scalar<std::string>(pr["kind"], "protocol.kind");
            if (k == "sinusoidal") p.kind = ProtocolKind::sinusoidal;
            else if (k == "pulse_train") p.kind = ProtocolKind::pulse_train;
            else if (k == "echo") p.kind = ProtocolKind::echo;
            else if (k == "custom") p.kind = ProtocolKind::custom;
            else fail(pr["kind"], "protocol.kind", "expected sinusoidal, pulse_train, echo or custom");
        }
        if (pr["periods"]) p.periods = finite(pr["periods"], "protocol.periods");
        if (pr["hold_periods"]) p.hold_periods = finite(pr["hold_periods"], "protocol.hold_periods");
        if (pr["hold_coupling"]) {
            const auto h = scalar<std::string>(pr["hold_coupling"], "protocol.hold_coupling");
            if (h == "drive") p.hold_coupling = HoldCoupling::drive;
            else if (h == "zero") p.hold_coupling = HoldCoupling::zero;
            else fail(pr["hold_coupling"], "protocol.hold_coupling", "expected drive or zero");
        }
        if (pr["echo_pulses"]) {
            p.echo_pulses.clear();
            const YAML::Node n = pr["echo_pulses"];
            if (n.IsScalar()) p.echo_pulses.push_back(count(n, "protocol.echo_pulses"));
            else for (const auto& item : n) p.echo_pulses.push_back(count(item, "protocol.echo_pulses"));
            if (p.echo_pulses.empty()) fail(n, "protocol.echo_pulses", "list is empty");
        }
        if (pr["free_periods"]) p.free_periods = finite(pr["free_periods"], "protocol.free_periods");
        if (pr["axes"]) {
            p.axes.clear();
            for (const auto& a : names(pr["axes"], "protocol.axes")) {
                try {
                    p.axes.push_back(model::parse_axis(a));
                } catch (const std::invalid_argument& e) {
                    fail(pr["axes"], "protocol.axes", e.what());
                }
            }
        }
        if (pr["interval"]) p.interval_periods = finite(pr["interval"], "protocol.interval");
        if (pr["first_pulse"]) p.first_pulse_periods = finite(pr["first_pulse"], "protocol.first_pulse");
    }

    if (const auto sch = section(root, "schedule", {"segments", "pulses"})) {
        if (p.kind != ProtocolKind::custom) {
            fail(sch, "schedule", "a schedule section requires protocol.kind = custom");
        }
        if (const YAML::Node segs = sch["segments"]) {
            if (!segs.IsSequence()) fail(segs, "schedule.segments", "expected a list");
            for (const auto& seg : segs) {
                for (const char* key : {"start", "end", "g"}) {
                    if (!seg[key]) fail(seg, std::string("schedule.segments.") + key, "missing");
                }
                model::Segment m;
                m.t_start = kPeriod * finite(seg["start"], "schedule.segments.start");
                m.t_end = kPeriod * finite(seg["end"], "schedule.segments.end");
                m.g = waveform(seg["g"], "schedule.segments.g");
                m.delta = seg["delta"] ? waveform(seg["delta"], "schedule.segments.delta")
                                       : model::Waveform{model::Constant{s.delta}};
                s.custom.segments.push_back(m);
            }
        }
        if (const YAML::Node pulses = sch["pulses"]) {
            if (!pulses.IsSequence()) fail(pulses, "schedule.pulses", "expected a list");
            for (const auto& pu : pulses) {
                if (!pu["time"] || !pu["axis"]) fail(pu, "schedule.pulses", "needs time and axis");
                model::Pulse m;
                m.time = kPeriod * finite(pu["time"], "schedule.pulses.time");
                try {
                    m.axis = model::parse_axis(scalar<std::string>(pu["axis"], "schedule.pulses.axis"));
                } catch (const std::invalid_argument& e) {
                    fail(pu["axis"], "schedule.pulses.axis", e.what());
                }
                s.custom.pulses.push_back(m);
            }
        }
    }

    if (const auto out = section(root, "outputs",
                                 {"wigner", "wigner_q", "wigner_p", "states",
                                  "trajectory_samples", "checkpoints"})) {
        if (out["wigner"]) s.outputs.wigner = names(out["wigner"], "outputs.wigner");
        if (out["wigner_q"]) s.outputs.wigner_q = grid_axis(out["wigner_q"], "outputs.wigner_q");
        if (out["wigner_p"]) s.outputs.wigner_p = grid_axis(out["wigner_p"], "outputs.wigner_p");
        if (out["states"]) s.outputs.states = names(out["states"], "outputs.states");
        if (out["trajectory_samples"]) {
            s.outputs.trajectory_samples = count(out["trajectory_samples"], "outputs.trajectory_samples");
            if (s.outputs.trajectory_samples == 0) {
                fail(out["trajectory_samples"], "outputs.trajectory_samples", "must be positive");
            }
        }
        if (out["checkpoints"]) s.outputs.checkpoints = numbers(out["checkpoints"], "outputs.checkpoints");
    }

    if (const auto num = section(root, "numerics", {"dim", "steps_per_period"})) {
        if (num["dim"]) s.numerics.dim = count(num["dim"], "numerics.dim");
        if (num["steps_per_period"]) {
            s.numerics.steps_per_period = count(num["steps_per_period"], "numerics.steps_per_period");
        }
    }
    return s;
}

Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides) {
    YAML::Node tree = load_tree(path);
    for (const auto& o : overrides) apply_override(tree, o);
    std::string stem = path;
    if (const auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
    if (const auto dot = stem.find_last_of('.'); dot != std::string::npos) stem = stem.substr(0, dot);
    return interpret(tree, stem);
}

} // namespace rabicat::cli
