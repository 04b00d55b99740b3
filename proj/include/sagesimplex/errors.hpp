#pragma once

#include <stdexcept>
#include <string>

namespace sagesimplex {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatch, non-finite values, bad exponents.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The support does not have the required structure (affine dependence,
/// exponent outside the affine hull, singular moment map, ...).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Exponential overflow in the moment map.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A point in moment coordinates that has no preimage.
class NotInImageError : public Error {
 public:
  using Error::Error;
};

/// The operation does not support this kind of region.
class UnsupportedRegionError : public Error {
 public:
  using Error::Error;
};

/// Something that must not happen if the mathematics holds.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sagesimplex
