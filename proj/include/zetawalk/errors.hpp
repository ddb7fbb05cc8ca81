#pragma once

#include <stdexcept>
#include <string>

namespace zetawalk {

/// Base of every error raised by the library. The CLI maps subclasses
/// onto exit codes (precondition -> 2, convergence -> 3).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation requested at s = 1.
class PoleError : public DomainError {
public:
    PoleError() : DomainError("zeta has a pole at s = 1") {}
};

/// Argument outside the supported evaluation range of a routine.
class RangeError : public DomainError {
public:
    using DomainError::DomainError;
};

/// |t| exceeds the configured cap of zeta_critical. Carries |t| so callers
/// can record the sample instead of dropping it.
class CapExceededError : public DomainError {
public:
    CapExceededError(double abs_t, double cap);
    double abs_t() const noexcept { return abs_t_; }
    double cap() const noexcept { return cap_; }

private:
    double abs_t_;
    double cap_;
};

/// The closed form for E Z_{n2} conj(Z_{m2}) is singular at m = n + 1,
/// 2(1 - sigma) = 1; the quadrature route must be used instead.
class SingularCaseError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Requested work exceeds a fixed cost ceiling.
class CostGuardError : public DomainError {
public:
    using DomainError::DomainError;
};

/// An iterative numerical method did not reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A cooperative cancellation request was observed.
class Cancelled : public Error {
public:
    Cancelled() : Error("operation cancelled") {}
};

}  // namespace zetawalk
