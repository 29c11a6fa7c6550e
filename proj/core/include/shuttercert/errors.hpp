#pragma once

#include <stdexcept>
#include <string>

namespace shuttercert {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Observed statistics lie outside the strategy polytope of the assumed source.
struct InfeasibleStats : Error {
    using Error::Error;
};

// Source parameter makes the certification vacuous (p exactly 0 or 1).
struct DegenerateSource : Error {
    using Error::Error;
};

// Mixture has no components with positive weight.
struct EmptySupport : Error {
    using Error::Error;
};

// Candidate search stayed feasible past the configured guard; the candidate
// family is provably finite, so this indicates a modeling error.
struct GuardExceeded : Error {
    using Error::Error;
};

// Oracle instance exceeds the size the brute-force solver is meant for.
struct ScaleExceeded : Error {
    using Error::Error;
};

// LP constraint set is empty.
struct LpInfeasible : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

// Leftover-hash output length came out below one bit.
struct InsufficientEntropy : Error {
    using Error::Error;
};

struct FormatError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace shuttercert
