#pragma once

#include <stdexcept>
#include <string>

namespace attnkit {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad range, non-finite value, empty input).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A map that cannot be normalized or scored (zero mass, zero variance).
class DegenerateMap : public Error {
 public:
  using Error::Error;
};

/// Operands have mismatched dimensions or cardinalities.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A sample lacks the predicted attention map an operation requires.
class MissingAttention : public Error {
 public:
  using Error::Error;
};

/// A convolution kernel exceeds the image extent.
class KernelTooLarge : public Error {
 public:
  using Error::Error;
};

/// The fusion optimizer produced a non-finite loss.
class OptimizerDiverged : public Error {
 public:
  using Error::Error;
};

/// Log-variance has no finite optimum (the divergence it weights is zero).
class DegenerateUncertainty : public Error {
 public:
  using Error::Error;
};

/// A benchmark reference row carries no usable degradation signal.
class DegenerateReference : public Error {
 public:
  using Error::Error;
};

/// File could not be read, parsed, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace attnkit
