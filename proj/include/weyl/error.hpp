#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace weyl {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed expression text or scenario document (syntax, unknown names,
// structural problems). Maps to CLI exit code 2.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  explicit ParseError(const std::string& what) : Error(what), position(0) {}
  std::size_t position;
};

// Evaluation left the domain of a function: log of a non-positive value,
// division by zero, sqrt of a negative, fractional power of a non-positive
// base.
struct EvalDomainError : Error {
  using Error::Error;
};

// A matrix that must be invertible is numerically singular.
struct SingularMatrixError : Error {
  using Error::Error;
};

// An evaluated metric does not have its declared signature.
struct SignatureError : Error {
  using Error::Error;
};

// Quadrature or ODE step-halving gate failed to converge.
struct ConvergenceError : Error {
  using Error::Error;
};

// A sampled numeric preflight check failed while building or loading a
// scenario (non-closed psi, non-invariant field, ...). Maps to CLI exit
// code 1: the input parsed fine, a numeric check failed.
struct PreflightError : Error {
  using Error::Error;
};

}  // namespace weyl
