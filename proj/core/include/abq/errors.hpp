#pragma once

#include <stdexcept>

namespace abq {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, malformed configuration, or inputs that violate a
/// documented precondition.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Requested problem size exceeds a configured capacity limit.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// A randomized construction exhausted its retry budget.
class GenerationError : public Error {
public:
    using Error::Error;
};

/// Non-finite values appeared, or a numerical procedure failed to produce a
/// usable answer.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A requested target cannot be met by the data or fit at hand.
class UnreachableError : public Error {
public:
    using Error::Error;
};

/// Filesystem or serialization failure.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace abq
