#pragma once

#include <stdexcept>
#include <string>

namespace mia {

// Base class for every error raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid numeric argument (negative distance, nonpositive power, ...).
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Invalid configuration (node count too small, exhaustive guard, ...).
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Malformed input file; the message names the offending field.
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Mismatched vector/matrix dimensions. Programming fault, not a status.
struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// A transmission order contains a node that cannot accumulate any
// information from its predecessors; its decode constraint can never be met.
struct InfeasibleOrderError : Error {
    explicit InfeasibleOrderError(const std::string& msg) : Error(msg) {}
};

// The destination is unreachable through positive-rate links.
struct NoRouteError : Error {
    explicit NoRouteError(const std::string& msg) : Error(msg) {}
};

// Too many failed trials in an experiment run.
struct ExperimentError : Error {
    explicit ExperimentError(const std::string& msg) : Error(msg) {}
};

// Invariant violation inside the library (e.g. an allocation LP reported
// unbounded, which is impossible by construction).
struct InternalError : Error {
    explicit InternalError(const std::string& msg) : Error(msg) {}
};

}  // namespace mia
