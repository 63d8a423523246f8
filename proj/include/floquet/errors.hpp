#pragma once

#include <stdexcept>
#include <string>

namespace floquet {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the supported domain (mode index, zero number, ...).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid model, grid or configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A separation-coefficient denominator vanishes (or nearly so).
class ResonanceError : public Error {
 public:
  using Error::Error;
};

/// Coupled oscillator with a non-positive normal-mode frequency squared.
class StabilityError : public Error {
 public:
  using Error::Error;
};

/// Requested operation does not apply to this model variant.
class UnsupportedVariant : public Error {
 public:
  using Error::Error;
};

/// Grid dimension does not match the model dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature failed to converge; carries the achieved estimate.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_estimate)
      : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}
  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

/// Linear-solve breakdown, NaN, resource guard and similar numerical failures.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace floquet
