#pragma once

#include <stdexcept>
#include <string>

namespace cxhyp {

// Violated call contract: bad arguments, unsupported dimension, missing
// analytic branch. The CLI maps these to exit code 2.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical guard tripped at run time (containment or singularity).
// The CLI maps these to exit code 3.
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Radial value too close to the unit sphere for the hyperbolic kernel.
class SingularityError : public GuardError {
public:
    using GuardError::GuardError;
};

// A body left the region its claims promise (e.g. unit-ball containment).
class ContainmentError : public GuardError {
public:
    using GuardError::GuardError;
};

} // namespace cxhyp
