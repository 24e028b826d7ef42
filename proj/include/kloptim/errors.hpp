#pragma once

#include <stdexcept>
#include <string>

namespace kloptim {

// Bad arguments: wrong dimensions, non-finite entries, parameters out of range.
struct InputError : std::invalid_argument {
    explicit InputError(const std::string& msg) : std::invalid_argument(msg) {}
};

// An iteration failed to converge or produced garbage despite valid input.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Shifted matrix is singular or too ill-conditioned to solve reliably.
struct SingularityError : NumericalError {
    explicit SingularityError(const std::string& msg) : NumericalError(msg) {}
};

// A problem setup whose declared constants stopped being valid at runtime
// (iterate left the certified ball, y*(x) hit the boundary of Y, ...).
struct ConfigurationError : std::runtime_error {
    explicit ConfigurationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Not enough usable data points for an estimator or fit.
struct InsufficientDataError : std::runtime_error {
    explicit InsufficientDataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kloptim
