#pragma once

#include <stdexcept>
#include <string>

namespace curveflow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid user configuration: bad N, radii, scenario values.
struct ConfigError : Error {
    using Error::Error;
};

// Scenario text could not be parsed; `line` is 1-based.
struct ParseError : ConfigError {
    int line;
    ParseError(int line_, const std::string& msg)
        : ConfigError("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct DegenerateCurveError : Error {
    using Error::Error;
};

struct ArgumentError : Error {
    using Error::Error;
};

struct WeightError : Error {
    using Error::Error;
};

struct UnsupportedVariantError : Error {
    using Error::Error;
};

// Scale-invariant weight (p = -3) requested for a Hamiltonian lacking the required flow invariances.
struct InvarianceError : Error {
    using Error::Error;
};

struct DegenerateSpanError : Error {
    using Error::Error;
};

struct NumericalBlowupError : Error {
    long step;
    NumericalBlowupError(long step_, const std::string& msg) : Error(msg), step(step_) {}
};

struct EdgeCollapseError : Error {
    long step;
    EdgeCollapseError(long step_, const std::string& msg) : Error(msg), step(step_) {}
};

}  // namespace curveflow
