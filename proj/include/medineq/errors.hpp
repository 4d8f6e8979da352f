#pragma once

#include <stdexcept>
#include <string>

namespace medineq {

// Bad input: malformed specs, out-of-range arguments, inadmissible transfers.
// The CLI maps these to exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input was well-formed but the computation cannot proceed (zero
// denominators, non-convergence). The CLI maps these to exit code 2.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A required order statistic (or group mean) is zero.
class DegenerateSampleError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

}  // namespace medineq
