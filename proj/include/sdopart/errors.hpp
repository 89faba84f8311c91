#pragma once

#include <stdexcept>
#include <string>

namespace sdopart {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

// Malformed or inconsistent problem data (asymmetric input, size mismatch).
struct DataError : Error {
  using Error::Error;
};

struct LinearDependenceError : Error {
  using Error::Error;
};

struct SingularMatrixError : Error {
  using Error::Error;
};

struct NotPsdError : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct SolverError : Error {
  using Error::Error;
};

// The Jacobian is numerically singular where a nonsingular start is required.
struct SingularStartError : Error {
  using Error::Error;
};

struct UnknownNameError : Error {
  using Error::Error;
};

}  // namespace sdopart
