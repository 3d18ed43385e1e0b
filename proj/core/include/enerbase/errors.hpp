#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace enerbase {

/// Base class for all enerbase errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file content. Carries the 1-based line number and the
/// offending field when known (line 0 = not line-addressable).
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line = 0, std::string field = {})
        : Error(format(msg, line, field)), line_(line), field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string format(const std::string& msg, std::size_t line, const std::string& field) {
        std::string out = msg;
        if (line > 0) {
            out += " (line " + std::to_string(line);
            if (!field.empty()) out += ", field \"" + field + "\"";
            out += ")";
        }
        return out;
    }

    std::size_t line_;
    std::string field_;
};

/// File could not be opened, read, or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration, e.g. an unknown IANA time zone name.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Inputs violate an operation's precondition or a type invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Not enough observed data to perform the requested computation.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Data is present but degenerate (e.g. all-zero series that cannot be
/// normalized into a distribution).
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

/// Temperature adjustment cannot be computed (baseline mean too close to
/// zero for a Celsius ratio to be meaningful).
class AdjustmentUndefinedError : public Error {
public:
    using Error::Error;
};

} // namespace enerbase
