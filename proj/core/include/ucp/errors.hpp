#pragma once

#include <stdexcept>
#include <string>

namespace ucp {

// Each category maps onto one CLI exit code (see tools/cli/commands.hpp).
enum class ErrorKind { Domain, Config, Data, Solver };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Argument outside the mathematical domain of an operation (non-positive length, N_e >= N_i, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

/// Unknown unit tag, malformed option, unreadable config file.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

/// Input data that cannot support the requested analysis (empty sweep, no plateau, degenerate shot).
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

class UnsaturatedSweepError : public DataError {
public:
    using DataError::DataError;
};

class DegenerateShotError : public DataError {
public:
    using DataError::DataError;
};

/// Numerical failure inside a solver; the message carries the diagnostics.
class SolverError : public Error {
public:
    explicit SolverError(const std::string& what) : Error(ErrorKind::Solver, what) {}
};

/// N_e >= N_i: the ion space charge cannot trap electrons.
class NoTrapError : public DomainError {
public:
    using DomainError::DomainError;
};

class ConvergenceError : public SolverError {
public:
    using SolverError::SolverError;
};

}  // namespace ucp
