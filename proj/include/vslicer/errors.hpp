#pragma once

#include <stdexcept>
#include <string>

namespace vslicer {

// Bad argument: wrong dimension, out-of-range parameter, malformed file.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A closed-form expression was evaluated outside the region where it is defined.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Enumeration or rejection budget exhausted.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The computation completed but the result is degenerate (e.g. an unbounded polytope).
struct DegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace vslicer
