#pragma once

#include <stdexcept>
#include <string>

namespace hmsc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or unreadable input file.
struct ParseError : Error {
    using Error::Error;
};

/// A precondition on an operation's arguments does not hold.
struct InvalidInput : Error {
    using Error::Error;
};

/// Eigensolver failed to reach the requested residual tolerance.
struct SolverError : Error {
    SolverError(const std::string& what, double worst_residual)
        : Error(what), residual(worst_residual) {}
    double residual = 0.0;
};

/// Every bipartition of the region is degenerate; caller should stop recursing.
struct UnsplittableError : Error {
    using Error::Error;
};

}  // namespace hmsc
