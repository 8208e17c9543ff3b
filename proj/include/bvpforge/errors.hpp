#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bvpforge {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax or structural error while parsing an expression or problem file.
/// Carries the byte offset of the offending token where known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    explicit ParseError(const std::string& msg) : Error(msg), offset_(0) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Domain error during expression evaluation (log of non-positive,
/// sqrt of negative, division by zero, fractional power of a negative base).
class EvalError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or request (bad option values, unknown names).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A solver step failed structurally: zero pivot, singular update
/// denominator, or not enough data to build the derivative-free diagonal.
class SolveError : public Error {
public:
    using Error::Error;
};

/// Iterates blew up past the divergence guard.
class DivergedError : public Error {
public:
    using Error::Error;
};

}  // namespace bvpforge
