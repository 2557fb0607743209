#pragma once

#include <stdexcept>
#include <string>

namespace mongeo {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Map endpoints off 0/1 beyond tolerance.
struct BoundaryViolation : Error {
    using Error::Error;
};

/// Decreasing increment beyond tolerance.
struct MonotonicityViolation : Error {
    using Error::Error;
};

/// Argument outside the function's domain (evaluation off [0,1], empty interval, ...).
struct DomainError : Error {
    using Error::Error;
};

/// Zero or negative density where a positive one is required (strict mode).
struct DegenerateDensity : Error {
    using Error::Error;
};

/// Time integration produced an invalid slice; refine the time grid.
struct StepRejected : Error {
    using Error::Error;
};

/// Grids of two operands do not match.
struct GridMismatch : Error {
    using Error::Error;
};

/// Malformed or unreadable input file.
struct IoError : Error {
    using Error::Error;
};

} // namespace mongeo
