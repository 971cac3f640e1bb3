#pragma once

#include <stdexcept>
#include <string>

namespace occbound {

// Argument outside the mathematical domain of an operation (t <= 0, lambda <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Adaptive refinement hit its depth or subdivision cap before reaching the tolerance.
class ToleranceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A profile function was handed over without a finite support or a tail certificate.
class UnboundedSupportError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The input violates a hypothesis a bound depends on (e.g. f increasing in t).
class HypothesisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace occbound
