#pragma once

#include <stdexcept>
#include <string>

namespace lab {

// Error taxonomy shared by all modules. Each condition named in an operation
// contract gets its own type so tests can assert on the exact failure mode.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LatticeMismatch : Error {
  using Error::Error;
};
struct NotLatticeCompatible : Error {
  using Error::Error;
};
struct AlreadySymmetric : Error {
  using Error::Error;
};
struct NoValidRho : Error {
  using Error::Error;
};
struct EmptySet : Error {
  using Error::Error;
};
struct EmptyParallelSet : Error {
  using Error::Error;
};
struct AntipodalInput : Error {
  using Error::Error;
};
struct RejectionBudgetExceeded : Error {
  using Error::Error;
};
struct PreconditionViolated : Error {
  using Error::Error;
};
struct UnsupportedSpec : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct NotPositiveDefinite : Error {
  using Error::Error;
};
struct NotUnitDeterminant : Error {
  using Error::Error;
};

}  // namespace lab
