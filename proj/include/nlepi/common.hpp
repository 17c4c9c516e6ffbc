// Shared error types and small numeric helpers.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlepi {

// Raised for bad arguments, bad configs, violated preconditions.
// The CLI maps this to exit code 1.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a running simulation must stop (NaN state, CFL violation
// in strict mode). The CLI maps this to exit code 2.
struct solver_abort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw validation_error(msg);
}

// sign(0) = 0 convention, used by the |x| kernel derivative.
inline double sgn(double x) {
    return (x > 0.0) - (x < 0.0);
}

}  // namespace nlepi
