#pragma once

#include <stdexcept>
#include <string>

namespace appauth {

// Exception hierarchy. The CLI maps each family onto an exit code.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller passed arguments that violate an operation's preconditions.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Unreadable or unwritable file.
class IoError : public Error {
public:
    using Error::Error;
};

/// Input data did not match the expected schema.
class FormatError : public Error {
public:
    using Error::Error;
};

/// A metric whose denominator is zero.
class UndefinedMetric : public Error {
public:
    using Error::Error;
};

/// Numerical breakdown (e.g. a zero-probability forward step during training).
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace appauth
