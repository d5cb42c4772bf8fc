#pragma once

#include <stdexcept>
#include <string>

namespace nckob {

// Base of everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: zero vectors, bad sample counts, out-of-range options.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Arguments outside the mathematical domain of an operation (v beyond vmax,
// base points on or outside the ellipsoid, a disc form that does not exist
// for the requested data).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A disc parameter set that cannot satisfy the boundary normalization.
class InfeasibleParameters : public Error {
 public:
  using Error::Error;
};

// A postcondition failed. Seeing one of these means a bug or a floating point
// breakdown, never bad user input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace nckob
