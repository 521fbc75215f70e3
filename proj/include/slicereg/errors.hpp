#pragma once

#include <stdexcept>
#include <string>

namespace slicereg {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inversion of a quaternion whose modulus is below the configured floor.
struct ZeroDivisionError : Error {
    using Error::Error;
};

/// Evaluation requested outside the function's parameter domain.
struct DomainError : Error {
    using Error::Error;
};

/// Evaluation too close to a kernel pole sphere.
struct PoleError : Error {
    using Error::Error;
};

/// Adaptive quadrature exhausted its subdivision budget.
struct NonConvergenceError : Error {
    using Error::Error;
};

/// Invalid construction parameter (bad radius, too few samples, ...).
struct ParamError : Error {
    using Error::Error;
};

/// A classification did not stabilise under window growth.
struct UndecidableError : Error {
    using Error::Error;
};

} // namespace slicereg
