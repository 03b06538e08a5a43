// errors.hpp — exception types shared across the library.
#pragma once

#include <stdexcept>

namespace tbcav {

// Base for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario/configuration problems: bad fields, mismatched lengths, invalid values.
struct ConfigError : Error {
    using Error::Error;
};

// Sweep parameter path does not resolve to a scalar.
struct UnknownParameterPath : ConfigError {
    using ConfigError::ConfigError;
};

// Structurally inconsistent inputs, e.g. coupling vector length != n_levels.
struct ConfigMismatch : ConfigError {
    using ConfigError::ConfigError;
};

// Requested state space exceeds the configured amplitude cap.
struct DimensionOverflow : Error {
    using Error::Error;
};

struct QuadratureNonConvergence : Error {
    using Error::Error;
};

struct DegenerateSpectrum : Error {
    using Error::Error;
};

struct NormViolation : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

struct InvalidDensity : Error {
    using Error::Error;
};

struct NoOscillation : Error {
    using Error::Error;
};

struct ZeroState : Error {
    using Error::Error;
};

}  // namespace tbcav
