#pragma once

#include <stdexcept>
#include <string>

namespace seqmeas {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Two objects live in Hilbert spaces of different dimension.
class DimensionMismatchError : public Error {
  public:
    using Error::Error;
};

/// Attempt to normalize a vector whose norm is below the zero tolerance.
class NullVectorError : public Error {
  public:
    using Error::Error;
};

/// A collapse was requested onto an outcome of (near-)zero probability.
class ImpossibleOutcomeError : public Error {
  public:
    using Error::Error;
};

/// A request exceeds the exact-enumeration capacity.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// An input value violates a structural constraint (non-Hermitian matrix,
/// non-orthonormal basis, unnormalized resolution column, unknown label, ...).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// A scenario configuration file could not be parsed.
class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace seqmeas
