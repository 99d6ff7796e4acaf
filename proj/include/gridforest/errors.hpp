#pragma once

#include <stdexcept>
#include <string>

namespace gridforest {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Network construction or invariant violation.
struct NetworkError : Error {
    using Error::Error;
};

/// Graph-oracle precondition failure (dimension mismatch, instance too
/// large, disconnected graph where connectivity is required, ...).
struct GraphError : Error {
    using Error::Error;
};

/// MILP container misuse (unknown variable, bad bounds, ...).
struct ModelError : Error {
    using Error::Error;
};

/// Solver backend unavailable or protocol failure.
struct SolverError : Error {
    using Error::Error;
};

/// Strict-schema violation while reading a data file.
struct SchemaError : Error {
    using Error::Error;
};

/// An optimal solution failed a post-hoc model invariant; this signals a
/// model-building bug, not bad input.
struct VerificationError : Error {
    using Error::Error;
};

} // namespace gridforest
