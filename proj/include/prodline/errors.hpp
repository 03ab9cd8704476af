#pragma once

#include <stdexcept>
#include <string>

namespace prodline {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameter ordering violated (v_L >= v_H).
struct OrderingError : Error {
    using Error::Error;
};

/// A strictly positive quantity was zero or negative.
struct NonPositiveError : Error {
    using Error::Error;
};

/// Quality cap below the top type's unconstrained quality 1/c.
struct CapTooSmallError : Error {
    using Error::Error;
};

/// Argument outside its admissible domain.
struct DomainError : Error {
    using Error::Error;
};

/// Operation called for a regime it does not apply to.
struct RegimeError : Error {
    using Error::Error;
};

/// Root finding produced no root in the required bracket.
struct NoRootError : Error {
    using Error::Error;
};

/// Two computation routes that must agree disagreed.
struct ConsistencyError : Error {
    using Error::Error;
};

/// Linear program has no feasible point (signals a grid bug).
struct InfeasibleError : Error {
    using Error::Error;
};

/// Linear program objective unbounded (signals an objective bug).
struct UnboundedError : Error {
    using Error::Error;
};

}  // namespace prodline
