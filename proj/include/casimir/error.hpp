#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

// Bad argument: maps to CLI exit code 1.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Order outside the supported half-integer grid.
class UnsupportedOrder : public DomainError {
public:
    using DomainError::DomainError;
};

// Requested accuracy not reached within the term budget: exit code 2.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Enumeration too large for the configured memory/term guard: exit code 2.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Least-squares system too poorly conditioned to trust: exit code 2.
class IllConditioned : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace casimir
