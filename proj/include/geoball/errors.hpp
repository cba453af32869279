#pragma once

#include <stdexcept>
#include <string>

namespace geoball {

// Invalid input: radius outside the admissible range, malformed manifold, bad flags.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure did not meet its contract (bracket lost, quadrature
// depth exhausted, step size underflow).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace geoball
