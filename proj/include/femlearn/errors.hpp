#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace femlearn {

/// Thrown when a tridiagonal solve hits a (near-)zero pivot.
class SingularSystemError : public std::runtime_error {
public:
    explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when training produces non-finite parameters or cost.
/// Carries the iteration at which the blow-up was detected.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(long long iteration, const std::string& what)
        : std::runtime_error(what), iteration_(iteration) {}
    long long iteration() const noexcept { return iteration_; }

private:
    long long iteration_;
};

/// Thrown on malformed text input (CSV, model files). Carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace femlearn
