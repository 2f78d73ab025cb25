#pragma once

#include <stdexcept>

namespace mbss {

// Numerical failure inside a matrix or polynomial routine.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A pivot collapsed below the singularity threshold during elimination.
struct SingularMatrix : NumericError {
    using NumericError::NumericError;
};

// An iterative routine exhausted its budget without meeting tolerance.
struct NoConvergence : NumericError {
    using NumericError::NumericError;
};

// Input outside the mathematical domain of an operation
// (e.g. evaluating the plant at or past the magnet face, x1 <= 0).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pole placement requested on a rank-deficient controllability matrix.
struct NotControllable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Observer design requested on a rank-deficient observability matrix.
struct NotObservable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A pole set that is not closed under conjugation cannot yield real gains.
struct ComplexCoefficients : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The Riccati iteration could not be started from a stabilizing gain.
struct NoStabilizingSeed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace mbss
