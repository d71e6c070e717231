#pragma once
#include <stdexcept>
#include <string>

namespace helmres {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// bad or inconsistent user input (maps to exit code 2)
struct ParameterError : Error {
    using Error::Error;
};

// malformed configuration file; the message carries the offending key
struct ConfigError : ParameterError {
    using ParameterError::ParameterError;
};

struct GeometryError : Error {
    using Error::Error;
};

// numerical failures (maps to exit code 1)
struct NumericalError : Error {
    using Error::Error;
};

struct NotPositiveDefinite : NumericalError {
    using NumericalError::NumericalError;
};

struct DegenerateModeError : NumericalError {
    int mode;
    DegenerateModeError(const std::string& what, int j) : NumericalError(what), mode(j) {}
};

struct WindowError : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace helmres
