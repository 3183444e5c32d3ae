#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mklock {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed .bench / KISS2 / schedule text. line() is 1-based, 0 when the
// problem is not tied to a single line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Two circuits (or a circuit and a stimulus) disagree on ports or widths.
class InterfaceMismatch : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace mklock
