#pragma once

#include <stdexcept>
#include <string>

namespace pdgeo {

// Error taxonomy. The CLI maps these onto exit codes 2 (input/domain),
// 3 (resource) and 4 (numeric).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition on a value failed (non-SPD matrix, tied direction, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed input file or argument.
class InputError : public Error {
public:
    using Error::Error;
};

/// A configured cap (grid cells, point count) would be exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Iterative method failed to converge, overflow, lost positivity.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace pdgeo
