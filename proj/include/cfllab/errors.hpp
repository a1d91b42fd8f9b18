#pragma once

#include <stdexcept>
#include <string>

namespace cfllab {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A precondition or type invariant was violated by the caller.
struct ContractError : Error {
    using Error::Error;
};

/// Singular input where regularity is required (zero leading series
/// coefficient, non-simple root, non-hyperbolic system).
struct SingularError : Error {
    using Error::Error;
};

/// An iteration exhausted its budget without meeting its tolerance.
struct ConvergenceError : Error {
    using Error::Error;
};

/// Boundary tracing lost a branch, or a tangency fit is inconclusive.
struct TraceError : Error {
    using Error::Error;
};

/// Malformed input text (catalog records, config files, CLI arguments).
struct ParseError : Error {
    using Error::Error;
};

} // namespace cfllab
