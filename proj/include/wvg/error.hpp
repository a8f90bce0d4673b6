#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wvg {

/// Invalid rule or profile parameters (a, λ, c out of range, empty schemes).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller misuse: dimension mismatch, zero samples, exceeded budgets.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The requested method cannot handle the given distribution or profile.
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical method was asked to run at a resolution that cannot be trusted.
class AccuracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace wvg
