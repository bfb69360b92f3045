#pragma once

#include <stdexcept>
#include <string>

namespace dimpol {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The repeated-variable dimension matrix does not have full rank.
struct RankDeficient : Error {
    using Error::Error;
};

/// A quantity uses a fundamental dimension that no combination of the
/// repeated variables can cancel.
struct UnreachableDimension : Error {
    using Error::Error;
};

/// A repeated variable evaluates to zero, so the scaling is not invertible.
struct ZeroRepeatedVariable : Error {
    using Error::Error;
};

/// Two transforms or tables built from different problem signatures.
struct SignatureMismatch : Error {
    using Error::Error;
};

/// Dimensionless contexts differ, so an exact transfer is not possible.
struct NotSimilar : Error {
    using Error::Error;
};

/// A query point lies outside the table domain (error-mode lookups).
struct OutOfDomain : Error {
    using Error::Error;
};

/// Dynamics returned a NaN or infinity.
struct NonFiniteDynamics : Error {
    using Error::Error;
};

/// Invalid numeric input to a closed-form solution.
struct DomainError : Error {
    using Error::Error;
};

/// Malformed configuration or data file.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace dimpol
