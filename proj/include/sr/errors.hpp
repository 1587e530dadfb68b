// errors.hpp — error taxonomy shared by the library and the CLI exit codes

#pragma once

#include <stdexcept>
#include <string>

namespace sr {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid input, domain violation, malformed configuration. CLI exit code 1.
struct ValidationError : Error {
    using Error::Error;
};

// Solver non-convergence, integrator failure, model violation. CLI exit code 2.
struct NumericalError : Error {
    using Error::Error;
};

// Problem size beyond a backend's hard capacity. CLI exit code 3.
struct CapacityError : Error {
    using Error::Error;
};

} // namespace sr
