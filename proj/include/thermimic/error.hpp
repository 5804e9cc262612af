#pragma once

#include <stdexcept>
#include <string>

namespace thermimic {

// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments or malformed inputs (config files, serialized data, shapes).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Numerical failures: truncation beyond tolerance, singular systems, non-PSD inputs.
class NumericError : public Error {
public:
    using Error::Error;
};

class TruncationError : public NumericError {
public:
    using NumericError::NumericError;
};

class SingularityError : public NumericError {
public:
    using NumericError::NumericError;
};

class NotPositiveError : public NumericError {
public:
    using NumericError::NumericError;
};

// A physically unrealizable request, e.g. a constellation outside the modulator's range.
class FeasibilityError : public Error {
public:
    using Error::Error;
};

}  // namespace thermimic
