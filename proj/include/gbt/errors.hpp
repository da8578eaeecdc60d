#pragma once

#include <stdexcept>
#include <string>

namespace gbt {

/// Argument outside the domain of a map or function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Operation called on an object that does not satisfy its precondition
/// (wrong cut kind, too few levels, mismatched sizes, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative procedure failed to converge within its budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iteration cap exceeded while following an orbit.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Malformed configuration; `field` names the offending key, `line` is 1-based
/// (0 when the value came from a command-line flag).
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, int line, const std::string& what)
        : std::runtime_error(what), field_(std::move(field)), line_(line) {}

    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

}  // namespace gbt
