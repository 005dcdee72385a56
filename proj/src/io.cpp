#include "rabicat/io.hpp"

#include "rabicat/errors.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace rabicat::io {

std::string format(double v) {
    if (v == 0.0) v = 0.0; // drop the sign of -0
    std::ostringstream out;
    out << std::setprecision(10) << v;
    return out.str();
}

void write_summary(std::ostream& out, const std::vector<std::pair<std::string, double>>& summary) {
    for (const auto& [key, value] : summary) out << key << '=' << format(value) << '\n';
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_state(const std::filesystem::path& path, const SystemState& state, double time_periods) {
    std::ostringstream out;
    out << "# rabicat-state\n"
        << "dim_osc " << state.dim_osc << '\n'
        << "dim_qubit " << state.dim_qubit << '\n'
        << "time " << format(time_periods) << '\n'
        << "norm " << format(state.norm()) << '\n';
    for (const auto& a : state.amplitudes) out << format(a.real()) << ' ' << format(a.imag()) << '\n';
    write_text(path, out.str());
}

LoadedState read_state(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open state file '" + path.string() + "'", 0);
    LoadedState loaded;
    auto& s = loaded.state;
    std::string line;
    int lineno = 0;
    auto header = [&](const char* key) {
        ++lineno;
        if (!std::getline(in, line)) throw ParseError("unexpected end of file", lineno, key);
        std::istringstream ls(line);
        std::string k;
        double v = 0.0;
        if (!(ls >> k >> v) || k != key) throw ParseError("expected '" + std::string(key) + " <value>'", lineno, key);
        return v;
    };
    ++lineno;
    if (!std::getline(in, line) || line != "# rabicat-state") {
        throw ParseError("missing '# rabicat-state' header", lineno, "header");
    }
    const double dim_osc = header("dim_osc");
    const double dim_qubit = header("dim_qubit");
    loaded.time_periods = header("time");
    header("norm");
    if (dim_osc < 2 || dim_osc != std::floor(dim_osc) || (dim_qubit != 1 && dim_qubit != 2)) {
        throw ParseError("invalid dimensions", 2, "dim_osc");
    }
    s.dim_osc = static_cast<std::size_t>(dim_osc);
    s.dim_qubit = static_cast<std::size_t>(dim_qubit);
    s.amplitudes.resize(static_cast<Eigen::Index>(s.dim()));
    for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) {
        ++lineno;
        if (!std::getline(in, line)) throw ParseError("too few amplitudes", lineno, "amplitude");
        std::istringstream ls(line);
        double re = 0.0;
        double im = 0.0;
        if (!(ls >> re >> im)) throw ParseError("expected '<re> <im>'", lineno, "amplitude");
        s.amplitudes(i) = cplx(re, im);
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            throw ParseError("unexpected trailing content", lineno, "amplitude");
        }
    }
    s.unnormalized = std::abs(s.norm() - 1.0) > 1e-6;
    return loaded;
}

} // namespace rabicat::io
