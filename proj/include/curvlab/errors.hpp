#pragma once

#include <stdexcept>
#include <string>

namespace curvlab {

// Argument outside the mathematical domain of an operation (order out of
// range, radius outside the warped interval, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A hypothesis the caller was supposed to guarantee does not hold.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace curvlab
