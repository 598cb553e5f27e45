#pragma once

#include <stdexcept>
#include <string>

namespace filmflow {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateParametrization : Error {
  using Error::Error;
};

struct NonPositiveGap : Error {
  using Error::Error;
};

struct SingularJacobian : Error {
  using Error::Error;
};

struct TruncationTooLow : Error {
  using Error::Error;
};

struct NonSPDWeight : Error {
  using Error::Error;
};

struct SolverDivergence : Error {
  using Error::Error;
};

struct CFLViolation : Error {
  using Error::Error;
};

struct MissingCoefficient : Error {
  using Error::Error;
};

struct MissingFriction : Error {
  using Error::Error;
};

struct EpsilonTooSmall : Error {
  using Error::Error;
};

struct ConfigInvalid : Error {
  using Error::Error;
};

struct IoFailure : Error {
  using Error::Error;
};

}  // namespace filmflow
