#pragma once

#include <stdexcept>
#include <string>

namespace lawtraverse {

// Base for every failure that depends on the numbers rather than on how the
// tool was invoked. The CLI maps these to exit code 1.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested error at or below a law's asymptote.
class UnreachableError : public DomainError {
public:
    using DomainError::DomainError;
};

// Requested error above a law's start error (negative compute).
class AboveStartError : public DomainError {
public:
    using DomainError::DomainError;
};

class InsufficientDataError : public DomainError {
public:
    using DomainError::DomainError;
};

class FitFailureError : public DomainError {
public:
    using DomainError::DomainError;
};

// Malformed input files or strings. The CLI maps these to exit code 2.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace lawtraverse
