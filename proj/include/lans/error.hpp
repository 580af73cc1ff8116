#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lans {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the inputs of an operation was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Two grid-bound objects were combined on different grids.
class GridMismatch : public Error {
public:
    GridMismatch() : Error("grid mismatch") {}
};

/// Banded elimination met a pivot that is zero to working tolerance.
class SingularMatrix : public Error {
public:
    explicit SingularMatrix(std::size_t pivot)
        : Error("matrix is singular to tolerance at pivot " + std::to_string(pivot)),
          pivot_(pivot) {}
    std::size_t pivot() const { return pivot_; }

private:
    std::size_t pivot_;
};

/// An iterative solver (shooting, Newton, time stepping) failed to converge.
class SolverFailure : public Error {
public:
    using Error::Error;
};

/// Malformed run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace lans
