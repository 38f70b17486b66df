#pragma once

#include <stdexcept>
#include <string>

namespace thzcoh {

/// Invalid input: bad parameters, malformed files, unknown keys or units.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Integrator or quadrature could not reach the requested accuracy.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message)
{
    if (!condition) {
        throw ValidationError(message);
    }
}

} // namespace detail
} // namespace thzcoh
