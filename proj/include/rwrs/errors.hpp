#pragma once

#include <stdexcept>
#include <string>

namespace rwrs {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition or argument violation (length mismatch, invalid depth,
// malformed measure parameters, ...).
struct ContractError : Error {
    using Error::Error;
};

// A table-backed measure was queried past its declared depth.
struct DepthExceededError : ContractError {
    using ContractError::ContractError;
};

// simulate_record called on a measure without a sampling rule.
struct NotSampleableError : ContractError {
    using ContractError::ContractError;
};

// Estimation asked for deeper cylinders than the record supports.
struct InsufficientDataError : ContractError {
    using ContractError::ContractError;
};

// A diagonal block of the reconstruction system is numerically singular.
// witness_n is the walk-word length N of the failing block.
struct SingularSystemError : Error {
    SingularSystemError(const std::string& what, int n) : Error(what), witness_n(n) {}
    int witness_n;
};

// The step measure fits neither decision regime (not strongly asymmetric,
// not symmetric straightforward).
struct UnsupportedRegimeError : Error {
    using Error::Error;
};

// No cylinder divergence found up to the search depth; equivalence is not
// claimed, the search is reported as inconclusive.
struct InconclusiveDepthError : Error {
    InconclusiveDepthError(const std::string& what, int n) : Error(what), n_max(n) {}
    int n_max;
};

}  // namespace rwrs
