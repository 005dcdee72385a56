#include "rabicat/errors.hpp"
#include "rabicat/warnings.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace rabicat {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
    std::string out = "validation failed";
    for (const auto& p : problems) {
        out += "\n  - ";
        out += p;
    }
    return out;
}

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

WarningSink& sink_slot() {
    static WarningSink sink;
    return sink;
}

} // namespace

ValidationError::ValidationError(std::vector<std::string> problems_)
    : std::invalid_argument(join_problems(problems_)), problems(std::move(problems_)) {}

ParseError::ParseError(const std::string& what, int line_, std::string field_)
    : std::invalid_argument("line " + std::to_string(line_) +
                            (field_.empty() ? std::string{} : " (" + field_ + ")") + ": " + what),
      line(line_),
      field(std::move(field_)) {}

void warn(const std::string& message) {
    std::lock_guard lock(sink_mutex());
    auto& sink = sink_slot();
    if (sink) {
        sink(message);
    } else {
        std::cerr << "warning: " << message << '\n';
    }
}

WarningSink set_warning_sink(WarningSink sink) {
    std::lock_guard lock(sink_mutex());
    auto previous = std::move(sink_slot());
    sink_slot() = std::move(sink);
    return previous;
}

} // namespace rabicat
