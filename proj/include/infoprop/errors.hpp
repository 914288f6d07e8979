#pragma once

#include <stdexcept>
#include <string>

namespace infoprop {

/// Invalid model or run parameters (e.g. a power-law exponent <= 2).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain an operation is defined on.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Input that makes a formula degenerate, e.g. a pmf with zero mean.
class DegenerateInputError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised by the solvers when a step is too coarse for the current state.
class StepSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No external connections are left, so the propagation cannot continue.
class PropagationInterrupted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace infoprop
