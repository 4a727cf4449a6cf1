#pragma once

#include <stdexcept>
#include <string>

namespace setgrad {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or non-finite input.
struct InvalidInputError : Error {
  using Error::Error;
};

struct DimensionMismatchError : InvalidInputError {
  using InvalidInputError::InvalidInputError;
};

/// Operation requires a nonzero vector.
struct ZeroVectorError : Error {
  using Error::Error;
};

/// The dual mapping is set-valued for this norm; use dual_face instead.
struct NonUniqueDualMapError : Error {
  using Error::Error;
};

/// A unit-ball face has too many vertices to enumerate.
struct FaceTooLargeError : Error {
  using Error::Error;
};

/// Requested capability is not available for this function/region.
struct UnsupportedError : Error {
  using Error::Error;
};

}  // namespace setgrad
