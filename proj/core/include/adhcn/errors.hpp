#pragma once

#include <stdexcept>
#include <string>

namespace adhcn {

// Violations of input data contracts: malformed files, bad indices,
// inconsistent shapes coming from user data. CLI maps these to exit code 2.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failures: divergence, non-finite tensors. CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace adhcn
