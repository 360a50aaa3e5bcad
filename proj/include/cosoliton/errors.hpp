#pragma once

#include <stdexcept>
#include <string>

namespace cosoliton {

/// Malformed user input: spec documents, expression text, unbound names.
/// Maps to CLI exit status 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical breakdown during evaluation (singular frame, domain error,
/// non-finite result). Maps to CLI exit status 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cosoliton
