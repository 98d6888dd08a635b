#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracdq {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Point outside the domain where a query needs it inside.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Text input (node file, problem file, expression) failed to parse.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A dense factorization failed. Carries the condition estimate that was
/// available when the failure was detected.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, double condition)
        : Error(what + " (condition estimate " + std::to_string(condition) + ")"),
          condition_(condition) {}

    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

}  // namespace fracdq
