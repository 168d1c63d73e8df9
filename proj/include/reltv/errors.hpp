#pragma once

#include <stdexcept>
#include <string>

namespace reltv {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (files, colorings, option values).
struct InputError : Error {
    using Error::Error;
};

// A quantity left its mathematical domain: non-admissible tuple, argument
// outside the strip of the quantum dilogarithm, degenerate radicand, etc.
struct DomainError : Error {
    using Error::Error;
};

// An iterative method failed to reach its tolerance.
struct ConvergenceError : Error {
    using Error::Error;
};

}  // namespace reltv
