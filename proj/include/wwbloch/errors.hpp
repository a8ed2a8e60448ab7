#pragma once

#include <stdexcept>
#include <string>

namespace wwbloch {

// Bad user input: malformed config, out-of-range parameters, violated preconditions.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Breakdown inside a solver: small divisors, singular systems, failed convergence.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A structural property the code relies on failed to hold (symmetry, support, ...).
class InvariantViolation : public std::runtime_error {
public:
    explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

} // namespace wwbloch
