#pragma once

#include <stdexcept>
#include <string>

namespace mosk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A root finder or iterative solver did not reach its tolerance.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the domain on which the routine is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Requested operation has no implementation for this operator.
class Unsupported : public Error {
public:
    using Error::Error;
};

/// Forward-backward step size outside (0, 2*beta).
class StepSizeOutOfRange : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

} // namespace mosk
