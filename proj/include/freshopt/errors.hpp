/**
 * @file errors.hpp
 * @brief Exception hierarchy shared by every freshopt module
 */

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace freshopt {

/// Base of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain (e.g. a probability not in (0,1)).
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// Option contract violates its invariants (c0 > 0, ce > 0, w0 < c0+ce, c0+ce < p+g).
class InfeasibleContract : public Error {
public:
    using Error::Error;
};

/// Problem has no valid optimum under the closed forms.
class Infeasible : public Error {
public:
    explicit Infeasible(std::string what, std::vector<std::string> violations = {})
        : Error(std::move(what)), violations_(std::move(violations)) {}

    [[nodiscard]] const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Coordinating contract exists algebraically but is not a feasible contract.
class NonCoordinable : public Infeasible {
public:
    using Infeasible::Infeasible;
};

/// Bracketed root search found no sign change.
class NoRoot : public Error {
public:
    using Error::Error;
};

class TooFewRows : public Error {
public:
    using Error::Error;
};

/// Configuration problems. Exit code 2 at the CLI.
class ConfigError : public Error {
public:
    using Error::Error;
};

class ConfigNotFound : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ConfigParseError : public ConfigError {
public:
    ConfigParseError(std::string what, std::size_t line, std::size_t column)
        : ConfigError(std::move(what)), line_(line), column_(column) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// All validation failures, each prefixed with its field path.
class ConfigValidationError : public ConfigError {
public:
    explicit ConfigValidationError(std::vector<std::string> problems)
        : ConfigError(join(problems)), problems_(std::move(problems)) {}

    [[nodiscard]] const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out = "invalid configuration:";
        for (const auto& item : items) {
            out += "\n  ";
            out += item;
        }
        return out;
    }

    std::vector<std::string> problems_;
};

}  // namespace freshopt
