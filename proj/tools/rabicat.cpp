// rabicat: scenario-driven command line front end.
//
// Exit codes: 0 success, 1 usage, 2 parse or validation error, 3 numerical
// failure.

#include "rabicat/analysis.hpp"
#include "rabicat/errors.hpp"
#include "rabicat/io.hpp"
#include "rabicat/runner.hpp"
#include "rabicat/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace rabicat;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInvalid = 2, kNumerical = 3 };

struct Common {
    std::string scenario;
    std::vector<std::string> overrides;
    std::size_t dim{0};
    std::size_t steps{0};
    std::size_t jobs{1};
    std::string out_dir;
};

void add_common(CLI::App* cmd, Common& c, bool numerics) {
    cmd->add_option("scenario", c.scenario, "Scenario file (YAML)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--set", c.overrides, "Override a scenario value, e.g. system.delta=0.05")
        ->take_all();
    if (numerics) {
        cmd->add_option("--dim", c.dim, "Fock truncation (overrides numerics.dim)");
        cmd->add_option("--steps-per-period", c.steps, "Propagator steps per oscillator period")
            ->check(CLI::Range(32, 1 << 20));
    }
    cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1, 256));
    cmd->add_option("--out-dir", c.out_dir, "Output directory (default out/<scenario name>)");
}

std::vector<std::string> overrides_of(const Common& c) {
    auto o = c.overrides;
    if (c.dim != 0) o.push_back("numerics.dim=" + std::to_string(c.dim));
    if (c.steps != 0) o.push_back("numerics.steps_per_period=" + std::to_string(c.steps));
    return o;
}

fs::path out_dir_of(const Common& c, const std::string& name) {
    return c.out_dir.empty() ? fs::path("out") / name : fs::path(c.out_dir);
}

void print_summary(const cli::Summary& s) { io::write_summary(std::cout, s); }

int cmd_simulate(const Common& c) {
    const auto sc = cli::load_scenario(c.scenario, overrides_of(c));
    const auto result = cli::run_scenario(sc);
    cli::write_outputs(sc, result, out_dir_of(c, sc.name), c.jobs);
    print_summary(result.summary);
    return kOk;
}

int cmd_frame(const Common& c) {
    const auto sc = cli::load_scenario(c.scenario, overrides_of(c));
    const auto result = cli::run_frame(sc);
    cli::write_outputs(sc, result, out_dir_of(c, sc.name), c.jobs);
    print_summary(result.summary);
    return kOk;
}

int cmd_validate(const Common& c) {
    const auto sc = cli::load_scenario(c.scenario, overrides_of(c));
    const auto plan = cli::build_plan(sc);
    std::cout << "ok: " << sc.name << " (" << plan.variants.size() << " run"
              << (plan.variants.size() == 1 ? "" : "s") << ", dim_osc "
              << cli::choose_dim(sc, plan) << ")\n";
    return kOk;
}

std::vector<double> parse_axis_spec(const std::string& spec, const char* what) {
    std::vector<double> v;
    std::istringstream in(spec);
    for (std::string tok; std::getline(in, tok, ',');) {
        try {
            v.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw CLI::ValidationError(what, "'" + tok + "' is not a number");
        }
    }
    if (v.size() != 3 || v[2] < 2 || v[2] != static_cast<double>(static_cast<long>(v[2]))) {
        throw CLI::ValidationError(what, "expected lo,hi,count");
    }
    return v;
}

int cmd_wigner(const std::string& state_path, const std::string& q_spec, const std::string& p_spec,
               const std::string& out, std::size_t jobs) {
    const auto q = parse_axis_spec(q_spec, "--q");
    const auto p = parse_axis_spec(p_spec, "--p");
    auto loaded = io::read_state(state_path);
    SystemState osc = loaded.state;
    if (osc.dim_qubit == 2) {
        const double r = 1.0 / std::sqrt(2.0);
        osc = analysis::project_qubit(osc, {r, r}).oscillator;
    }
    osc = osc.normalized();
    const auto grid = analysis::wigner(osc, analysis::uniform_axis(q[0], q[1], static_cast<std::size_t>(q[2])),
                                       analysis::uniform_axis(p[0], p[1], static_cast<std::size_t>(p[2])),
                                       {jobs});
    std::ostringstream csv;
    grid.write_csv(csv);
    if (out.empty() || out == "-") {
        std::cout << csv.str();
    } else {
        io::write_text(out, csv.str());
        std::cout << "normalization=" << io::format(grid.normalization()) << '\n'
                  << "purity=" << io::format(grid.purity()) << '\n';
    }
    return kOk;
}

int cmd_sweep(const Common& c, const std::string& param, const std::vector<std::string>& values,
              const std::string& metric, const std::string& out) {
    struct Row {
        cli::Summary summary;
        std::exception_ptr error;
    };
    std::vector<Row> rows(values.size());
    std::string name;
    {
        const auto sc = cli::load_scenario(c.scenario, overrides_of(c));
        name = sc.name;
        cli::build_plan(sc);
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            try {
                auto o = overrides_of(c);
                o.push_back(param + "=" + values[i]);
                rows[i].summary = cli::run_scenario(cli::load_scenario(c.scenario, o)).summary;
            } catch (...) {
                rows[i].error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n = std::max<std::size_t>(1, std::min(c.jobs, values.size()));
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const auto& r : rows) {
        if (r.error) std::rethrow_exception(r.error);
    }

    std::ostringstream csv;
    csv << "param,value,metric,result\n";
    bool matched = metric.empty();
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (const auto& [key, v] : rows[i].summary) {
            if (!metric.empty() && key != metric) continue;
            matched = true;
            csv << param << ',' << values[i] << ',' << key << ',' << io::format(v) << '\n';
        }
    }
    if (!matched) throw ValidationError({"metric '" + metric + "' is not produced by this scenario"});
    const fs::path path = out.empty() ? out_dir_of(c, name) / "sweep.csv" : fs::path(out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    io::write_text(path, csv.str());
    std::cout << csv.str();
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qubit-oscillator cat-state simulator"};
    app.require_subcommand(1);

    Common sim, frm, val, swp;
    add_common(app.add_subcommand("simulate", "Run a scenario and write its outputs"), sim, true);
    add_common(app.add_subcommand("frame", "Analytic g~ trajectory only (no Fock numerics)"), frm, false);
    add_common(app.add_subcommand("validate", "Parse and validate a scenario"), val, true);

    auto* sweep = app.add_subcommand("sweep", "Run a scenario over a list of parameter values");
    add_common(sweep, swp, true);
    std::string param, metric, sweep_out;
    std::vector<std::string> values;
    sweep->add_option("--param", param, "Dotted scenario key, e.g. system.delta")->required();
    sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
    sweep->add_option("--metric", metric, "Only emit this summary key");
    sweep->add_option("--out", sweep_out, "CSV path (default <out-dir>/sweep.csv)");

    auto* wig = app.add_subcommand("wigner", "Wigner function of a saved state");
    std::string state_path, q_spec = "-6,6,121", p_spec = "-6,6,121", wig_out;
    std::size_t wig_jobs = 1;
    wig->add_option("state", state_path, "State file")->required()->check(CLI::ExistingFile);
    wig->add_option("--q", q_spec, "q axis as lo,hi,count");
    wig->add_option("--p", p_spec, "p axis as lo,hi,count");
    wig->add_option("--out", wig_out, "CSV path (default stdout)");
    wig->add_option("--jobs", wig_jobs, "Worker threads")->check(CLI::Range(1, 256));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (app.got_subcommand("simulate")) return cmd_simulate(sim);
        if (app.got_subcommand("frame")) return cmd_frame(frm);
        if (app.got_subcommand("validate")) return cmd_validate(val);
        if (app.got_subcommand("sweep")) return cmd_sweep(swp, param, values, metric, sweep_out);
        if (app.got_subcommand("wigner")) return cmd_wigner(state_path, q_spec, p_spec, wig_out, wig_jobs);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kInvalid;
    } catch (const ValidationError& e) {
        std::cerr << "validation failed:\n";
        for (const auto& p : e.problems) std::cerr << "  - " << p << '\n';
        return kInvalid;
    } catch (const InvalidDimension& e) {
        std::cerr << "invalid: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::out_of_range& e) {
        std::cerr << "invalid: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}
