// io.hpp: Deterministic text output (10 significant digits) and the plain
// text state format.
//
// State file layout:
//   # rabicat-state
//   dim_osc <N>
//   dim_qubit <1|2>
//   time <t in periods>
//   norm <norm>
//   <re> <im>        one line per amplitude

#pragma once

#include "rabicat/analysis.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace rabicat::io {

std::string format(double v);

void write_summary(std::ostream& out, const std::vector<std::pair<std::string, double>>& summary);

void write_state(const std::filesystem::path& path, const SystemState& state, double time_periods);

struct LoadedState {
    SystemState state;
    double time_periods{0.0};
};

// Throws ParseError with the offending line.
LoadedState read_state(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& content);

} // namespace rabicat::io
