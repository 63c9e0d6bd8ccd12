#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vofde {

/// Base of every error the toolkit raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Fractional order outside the open interval (0, 1).
class OrderDomainError : public DomainError {
public:
    OrderDomainError(const std::string& what, double alpha)
        : DomainError(what), alpha_(alpha) {}

    double alpha() const noexcept { return alpha_; }

private:
    double alpha_;
};

/// Index out of range or mismatched lengths.
class IndexError : public Error {
public:
    using Error::Error;
};

/// Iterative evaluation that failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// The problem definition cannot be solved as posed (e.g. a1 = 0).
class DegenerateProblemError : public Error {
public:
    using Error::Error;
};

/// A time step could not be completed. Carries the step index.
class StepFailure : public Error {
public:
    StepFailure(const std::string& what, std::size_t step)
        : Error(what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace vofde
