// errors.hpp: Exception types shared by the simulator modules

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rabicat {

struct InvalidDimension : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A requested superposition cancels to (numerically) nothing.
struct NullStateError : std::domain_error {
    using std::domain_error::domain_error;
};

struct DegeneracyError : std::domain_error {
    using std::domain_error::domain_error;
};

// Time stepping lost unitarity beyond the configured tolerance.
struct IntegrationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InternalConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IncompleteBasisError : std::runtime_error {
    IncompleteBasisError(const std::string& what, double residual_)
        : std::runtime_error(what), residual(residual_) {}
    double residual;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Collects every violated invariant so callers can report them all at once.
struct ValidationError : std::invalid_argument {
    explicit ValidationError(std::vector<std::string> problems_);
    std::vector<std::string> problems;
};

struct ParseError : std::invalid_argument {
    ParseError(const std::string& what, int line_, std::string field_ = {});
    int line;
    std::string field;
};

} // namespace rabicat
