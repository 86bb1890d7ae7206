#pragma once

#include <stdexcept>
#include <string>

namespace cpwqed {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operator or state dimensions / bases do not line up.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An input violates a documented precondition (negative rate, f <= 1, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A perturbative formula was evaluated at a zero denominator.
class ResonanceError : public Error {
public:
    using Error::Error;
};

/// Integrator failure: step-size underflow, step budget exhausted, non-finite state.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Malformed scenario configuration (unknown key, bad value, missing preset).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace cpwqed
