// errors.hpp — error types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace iongrad {

// Population escaped through the top of the truncated Fock space.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, double time_s, double population)
        : std::runtime_error(what), time(time_s), population(population) {}
    double time;        // simulation time at which the guard tripped (s)
    double population;  // offending population
};

// Analytic formula evaluated at a pole (e.g. omega_g == omega_r).
class ResonanceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Physical-constraint violation (e.g. 2*Omega_mu >= |omega_r - omega_g|).
class ConstraintError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested step size exceeds the resolution bound for the fastest term.
class StepSizeError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sinusoid fit could not lock onto an oscillation.
class FitError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config parse/validation failure; `path` points at the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string key_path = "")
        : std::runtime_error(what), path(std::move(key_path)) {}
    std::string path;
};

} // namespace iongrad
