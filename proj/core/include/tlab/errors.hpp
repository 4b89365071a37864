#pragma once

#include <stdexcept>
#include <string>

namespace tlab {

// Bad user/config input (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Precondition on mathematical domain violated.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical hazard: overflow, division by a vanishing transform, ... (CLI exit code 3).
struct NumericalHazard : std::runtime_error {
    explicit NumericalHazard(const std::string& what) : std::runtime_error(what) {}
};

// Hard resource cap exceeded (e.g. Gram matrix size).
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tlab
