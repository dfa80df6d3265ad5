#pragma once

#include <stdexcept>
#include <string>

namespace compacton {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters outside the admissible domain (p <= 2, omega <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A caller-side contract was violated (no sign change, rhs not orthogonal
/// to the kernel, negative entries handed to a rearrangement, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An iterative numerical kernel gave up. Carries the last estimate it had.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_estimate)
        : Error(what), last_estimate_(last_estimate) {}

    double last_estimate() const noexcept { return last_estimate_; }

private:
    double last_estimate_;
};

/// Computed data contradicts a structural fact the pipeline relies on,
/// e.g. a plus operator without exactly one negative eigenvalue.
class InconsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace compacton
