#pragma once

#include <stdexcept>
#include <string>

namespace entroflow {

/// Invalid configuration (unknown preset, bad grid, malformed scenario file).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid numerical input to an operation (mass mismatch, bad time ordering).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A function value left the domain it is restricted to.
class DomainViolation : public std::runtime_error {
public:
    explicit DomainViolation(const std::string& what) : std::runtime_error(what) {}
};

/// u has mass where v vanishes beyond the configured floor.
class SingularSupportError : public std::runtime_error {
public:
    explicit SingularSupportError(const std::string& what) : std::runtime_error(what) {}
};

/// Requested time step exceeds the stability limit.
class StepSizeError : public std::runtime_error {
public:
    explicit StepSizeError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite values appeared during time integration.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, double t, std::size_t step)
        : std::runtime_error(what), time(t), step_index(step) {}
    double time = 0.0;
    std::size_t step_index = 0;
};

/// A rescaled query fell outside the source grid.
class CoverageError : public std::runtime_error {
public:
    explicit CoverageError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite value met while evaluating coefficient fields.
class EvaluationError : public std::runtime_error {
public:
    explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace entroflow
