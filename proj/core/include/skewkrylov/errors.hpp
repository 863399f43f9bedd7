#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "skewkrylov/types.hpp"

namespace skewkrylov {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition violation: bad dimension, odd skew size, malformed config.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Raised by dense_solve when the factorization hits a zero or tiny pivot.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, double condition_estimate)
        : Error(what), condition_estimate_(condition_estimate) {}

    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

/// random_skew could not produce a nonsingular instance within its retry budget.
class InstanceGenerationError : public Error {
public:
    using Error::Error;
};

/// A Krylov basis reached its grade before the requested dimension.
class BasisTruncatedError : public Error {
public:
    BasisTruncatedError(const std::string& what, Index requested, Index grade)
        : Error(what), requested_(requested), grade_(grade) {}

    Index requested() const noexcept { return requested_; }
    Index grade() const noexcept { return grade_; }

private:
    Index requested_;
    Index grade_;
};

/// The vector handed to split_even_odd does not lie in the basis' subspace.
class StaleBasisError : public Error {
public:
    StaleBasisError(const std::string& what, double residual) : Error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A recurrence scalar became NaN or infinite.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, int iteration) : Error(what), iteration_(iteration) {}

    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

/// Matrix Market or report parse failure. line() is 1-based; 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// File could not be opened for reading (input) or writing (output).
class IoError : public Error {
public:
    enum class Direction { input, output };

    IoError(const std::string& what, Direction direction) : Error(what), direction_(direction) {}

    Direction direction() const noexcept { return direction_; }

private:
    Direction direction_;
};

}  // namespace skewkrylov
