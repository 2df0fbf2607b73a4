#pragma once

#include <stdexcept>
#include <string>

namespace regfrac {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument failed (out-of-range parameter, bad shape...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A mathematical hypothesis required by a verification routine does not hold,
/// e.g. a non-convex obstacle handed to a Liouville check.
class HypothesisViolation : public Error {
public:
    using Error::Error;
};

/// The numerics failed: NaN, stability bound violated, iteration budget exhausted.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

}  // namespace regfrac
