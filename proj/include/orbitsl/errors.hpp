// Exception hierarchy shared by all orbitsl modules.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace orbitsl {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a model function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Pass geometry that cannot exist (e.g. arccos argument far outside [-1, 1]).
class InvalidGeometry : public Error {
public:
    using Error::Error;
};

/// A decision variable exceeds its box constraint (frequency or power cap).
class ConstraintViolation : public Error {
public:
    using Error::Error;
};

/// A stage was asked to finish faster than its hardware allows.
class InfeasibleStage : public Error {
public:
    using Error::Error;
};

/// The whole per-pass problem has no feasible allocation.
class InfeasibleProblem : public Error {
public:
    InfeasibleProblem(const std::string& what, std::vector<std::string> binding_stages,
                      double required_pass_s)
        : Error(what),
          binding_stages_(std::move(binding_stages)),
          required_pass_s_(required_pass_s) {}

    const std::vector<std::string>& binding_stages() const noexcept { return binding_stages_; }

    /// Smallest pass duration for which the problem would be feasible.
    double required_pass_s() const noexcept { return required_pass_s_; }

private:
    std::vector<std::string> binding_stages_;
    double required_pass_s_;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

/// Base for everything raised while reading a scenario configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public ConfigError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : ConfigError(what), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class ValidationError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class UnknownKeyError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

}  // namespace orbitsl
