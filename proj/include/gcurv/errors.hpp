/// @file errors.hpp
/// @brief Error types mapped to CLI exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace gcurv {

/// Exit code 2: malformed or inconsistent configuration.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

/// Exit code 3: numerical conditioning (singular metric, FD noise above signal,
/// degenerate induced metric, rank-deficient normal equations, ...).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& m) : std::runtime_error(m) {}
};

struct SingularMetricError : NumericalError {
    explicit SingularMetricError(const std::string& m) : NumericalError(m) {}
};

struct PrecisionError : NumericalError {
    explicit PrecisionError(const std::string& m) : NumericalError(m) {}
};

struct FrameError : NumericalError {
    explicit FrameError(const std::string& m) : NumericalError(m) {}
};

/// Exit code 4: left the chart domain. Carries the exit time along the curve.
struct DomainError : std::runtime_error {
    DomainError(const std::string& m, double t) : std::runtime_error(m), exit_time(t) {}
    double exit_time;
};

}  // namespace gcurv
