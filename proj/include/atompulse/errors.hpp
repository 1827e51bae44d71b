#pragma once

#include <stdexcept>
#include <string>

namespace atompulse {

// Invalid configuration or input validation failure. CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integration failure: NaN, step underflow, consistency check tripped.
// CLI exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Problem size above hard limits (photon number caps). CLI exit code 4.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace atompulse
